#include <catch2/catch_amalgamated.hpp>

#include <boost/math/special_functions/jacobi.hpp>

#include <cmath>
#include <complex>

#include "su2hk/errors.hpp"
#include "su2hk/su2_kernel.hpp"

using namespace su2hk;
using Catch::Approx;

namespace {

// brute-force double sum over n in Z, k >= 0, Jacobi values from boost
double brute_spectral(double t, double r, double z, int nmax = 60, int kmax = 40) {
    double s = 0;
    for (int n = -nmax; n <= nmax; ++n) {
        int an = std::abs(n);
        for (int k = 0; k <= kmax; ++k) {
            double lam = 4.0 * k * (k + an + 1) + 2.0 * an;
            if (lam * t > 700) break;
            s += (2 * k + an + 1) * std::exp(-lam * t) * std::cos(n * z) * std::pow(std::cos(r), an) *
                 boost::math::jacobi(k, 0.0, double(an), std::cos(2 * r));
        }
    }
    return s;
}

double lsub(const Jet2& j) { return sublaplacian(j); }

}  // namespace

TEST_CASE("spectral series matches a brute-force sum") {
    for (double t : {0.3, 0.5, 1.0, 2.0})
        for (double r : {0.0, 0.4, 1.1, 1.5})
            for (double z : {0.0, 0.7, -2.5, kPi}) {
                auto e = pt_spectral(t, r, z);
                CHECK(e.value == Approx(brute_spectral(t, r, z)).epsilon(1e-12).margin(1e-13));
                CHECK(e.abs_err < 1e-11);
            }
}

TEST_CASE("truncation plan meets its bound") {
    for (double t : {0.01, 0.1, 1.0}) {
        SpectralKernel sk(t, 1e-13);
        CHECK(sk.plan().achieved_bound <= 1e-13);
        CHECK(sk.plan().n_max > 0);
    }
    CHECK_THROWS_AS(pt_spectral(0.005, 0.3, 0.3), Error);
}

TEST_CASE("integral and spectral representations agree") {
    for (double t : {0.35, 0.5, 1.0})
        for (double r : {0.05, 0.5, 1.2, 1.55})
            for (double z : {0.0, 0.4, 2.0, -3.0}) {
                auto a = pt_spectral(t, r, z);
                auto b = pt_integral(t, r, z);
                CHECK(std::abs(a.value - b.value) <= std::max(1e-8, a.abs_err + b.abs_err));
            }
}

TEST_CASE("small-time values frozen from an independent prototype") {
    // values from an arbitrary-precision evaluation of the integral representation
    struct Row {
        double t, r, z, v;
    };
    const Row rows[] = {{0.5, 0.8, 1.2, 0.97563379631099},
                        {1.0, 0.8, 0.0, 1.43806357124865},
                        {0.1, 0.5, 0.5, 0.89057354206266},
                        {0.02, 1.0, 0.0, 0.00117701655542},
                        {0.02, 0.8, 0.5, 2.32249247823e-5}};
    for (auto& w : rows) CHECK(pt(w.t, w.r, w.z).value == Approx(w.v).epsilon(1e-11));
}

TEST_CASE("cut-locus closed form on the axis") {
    for (double t : {0.2, 1.0})
        for (double z : {0.0, 0.5, 2.0, kPi}) {
            auto c = pt_cutlocus(t, z);
            CHECK(c.representation == KernelRep::CutlocusClosed);
            CHECK(c.value == Approx(pt_spectral(t, 0, z).value).epsilon(1e-10));
        }
    CHECK(pt(1.0, 0, 0).representation == KernelRep::CutlocusClosed);
}

TEST_CASE("diagonal value and its small-time behavior") {
    auto f = pt_diagonal_forms(1.0);
    CHECK(f.theta == Approx(f.spectral).epsilon(1e-13));
    // p_t(0) ~ pi^2 e^t / (16 t^2)
    double t = 0.02;
    CHECK(pt_diagonal(t) / (kPi * kPi * std::exp(t) / (16 * t * t)) == Approx(1).epsilon(1e-6));
}

TEST_CASE("unit mass and the semigroup identity") {
    QuadratureSpec spec{1e-13, 1e-11, 4000};
    for (double t : {0.2, 1.0}) {
        KernelField f(t, KernelField::Accuracy::Absolute);
        CHECK(haar_integrate_rz(f, spec, true).value == Approx(1).epsilon(1e-9));
    }
    KernelField f(0.3, KernelField::Accuracy::Absolute);
    auto sq = haar_integrate_rz([&](double r, double z) { return std::pow(f(r, z), 2); }, spec, true);
    CHECK(sq.value == Approx(pt_diagonal(0.6)).epsilon(1e-9));
}

TEST_CASE("kernel symmetries") {
    for (double t : {0.05, 0.6}) {
        CHECK(pt(t, 0.7, 0.9).value == Approx(pt(t, 0.7, -0.9).value).epsilon(1e-11));
        CHECK(pt(t, 0.7, 0.9).value == Approx(pt(t, 0.7, 0.9 + 2 * kPi).value).epsilon(1e-11));
    }
}

TEST_CASE("analytic jets match differences") {
    const double h = 1e-4;
    for (double t : {0.4, 1.0})
        for (double r : {0.3, 0.9, 1.4})
            for (double z : {0.2, -1.7}) {
                Jet2 j = pt_spectral_jet(t, r, z);
                auto p = [&](double a, double b) { return pt_spectral(t, a, b).value; };
                CHECK(j.f == Approx(p(r, z)).epsilon(1e-13));
                CHECK(j.fr == Approx((p(r + h, z) - p(r - h, z)) / (2 * h)).epsilon(1e-6).margin(1e-8));
                CHECK(j.fz == Approx((p(r, z + h) - p(r, z - h)) / (2 * h)).epsilon(1e-6).margin(1e-8));
                CHECK(j.frr == Approx((p(r + h, z) - 2 * p(r, z) + p(r - h, z)) / (h * h)).epsilon(1e-5).margin(1e-5));
                CHECK(j.fzz == Approx((p(r, z + h) - 2 * p(r, z) + p(r, z - h)) / (h * h)).epsilon(1e-5).margin(1e-5));
                CHECK(j.frz == Approx((p(r + h, z + h) - p(r + h, z - h) - p(r - h, z + h) + p(r - h, z - h)) / (4 * h * h))
                                   .epsilon(1e-5)
                                   .margin(1e-5));
            }
}

TEST_CASE("the kernel solves the heat equation") {
    const double dt = 1e-3;
    for (double t : {0.15, 0.6})
        for (double r : {0.4, 1.0})
            for (double z : {0.3, 1.9}) {
                auto p = [&](double tt) { return pt(tt, r, z).value; };
                double lhs = (-p(t + 2 * dt) + 8 * p(t + dt) - 8 * p(t - dt) + p(t - 2 * dt)) / (12 * dt);
                double rhs = lsub(pt_jet(t, r, z));
                CHECK(lhs == Approx(rhs).epsilon(1e-6).margin(1e-7));
            }
}

TEST_CASE("jets at small time stay accurate where the kernel is tiny") {
    double t = 0.05, r = 1.2, z = 2.5;
    Jet2 j = pt_jet(t, r, z);
    const double h = 2e-3;
    auto lp = [&](double a, double b) { return std::log(pt(t, a, b).value); };
    CHECK(j.fr / j.f == Approx((lp(r + h, z) - lp(r - h, z)) / (2 * h)).epsilon(1e-5));
    CHECK(j.fz / j.f == Approx((lp(r, z + h) - lp(r, z - h)) / (2 * h)).epsilon(1e-5));
}

TEST_CASE("Green function through the time integral") {
    // the closed form is normalized for the volume 2 pi^2 of the unit 3-sphere
    for (auto [r, z] : {std::pair{1.0, 0.5}, std::pair{0.4, 2.0}}) {
        auto ti = laplace_time_integral(0.0, r, z);
        CHECK(ti.normalized == Approx(green_function(r, z)).epsilon(1e-4));
    }
    CHECK_THROWS_AS(green_function(0, 0), Error);
}

TEST_CASE("Laplace transform identity") {
    auto c = laplace_check(1.0, 0.7, 1.1);
    CHECK(c.rel_diff < 1e-5);
    CHECK(std::abs(c.rhs_imag) < 1e-10 * std::abs(c.rhs));
}

TEST_CASE("shifted series p*") {
    // r = pi/2: only n = 0 survives and P_k(-1) = (-1)^k
    for (double t : {0.5, 1.0}) {
        double s = 0;
        for (int k = 1; k < 30; ++k) s += (2 * k + 1) * ((k % 2) ? -1.0 : 1.0) * std::exp(-4.0 * k * (k + 1) * t);
        CHECK(pt_star_shifted(t, kPi / 2, 0.4).real() == Approx(s).epsilon(1e-12));
    }
    // t = 3: the leading term is 2 e^{-18} e^{iz} cos r; the next one is about 3 e^{-24}
    double t = 3, r = 0.6, z = 1.1;
    std::complex<double> lead = 2 * std::exp(-18.0) * std::polar(1.0, z) * std::cos(r);
    CHECK(std::abs(pt_star_shifted(t, r, z) - lead) <= 4 * std::exp(-24.0));
    CHECK_THROWS_AS(pt_star_shifted(0.2, r, z), Error);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(pt(-1, 0.3, 0.3), Error);
    CHECK_THROWS_AS(pt(1, 2.0, 0.3), Error);
    CHECK_THROWS_AS(pt_integral(0.05, 1e-4, 0.3), Error);
    try {
        pt(0, 0.3, 0.3);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}
