#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "su2hk/errors.hpp"
#include "su2hk/geometry.hpp"
#include "su2hk/quadrature.hpp"
#include "su2hk/sphere_kernel.hpp"

using namespace su2hk;
using Catch::Approx;

namespace {

// direct sum with U_m(cosh s) = sinh((m+1)s) / sinh s
double hyperbolic_sum(double t, double s) {
    double acc = 0;
    for (int m = 0; m < 400; ++m) {
        double e = -m * (m + 2.0) * t;
        acc += (m + 1) * (std::exp(e + (m + 1) * s) - std::exp(e - (m + 1) * s)) / (2 * std::sinh(s));
    }
    return acc;
}

}  // namespace

TEST_CASE("prefactor") { CHECK(qt_prefactor(1.0) == Approx(std::sqrt(kPi) * std::exp(1.0) / 4)); }

TEST_CASE("spectral and theta forms agree") {
    for (double t : {0.1, 0.35, 1.0})
        for (double th : {0.0, 0.3, 1.2, 2.0, 3.0, kPi}) {
            auto a = qt_spectral(t, std::cos(th));
            auto b = qt_theta_trig(t, th);
            CHECK(a.representation == QtRep::Spectral);
            CHECK(b.value == Approx(a.value).epsilon(1e-12).margin(1e-13));
        }
}

TEST_CASE("continuation beyond x = 1") {
    for (double t : {0.2, 0.6})
        for (double s : {0.1, 0.8, 2.0}) {
            auto q = qt_theta_hyp(t, s);
            CHECK(q.value == Approx(hyperbolic_sum(t, s)).epsilon(1e-11));
            CHECK(log_qt(t, std::cosh(s)) == Approx(std::log(q.value)).epsilon(1e-12));
        }
    CHECK_THROWS_AS(qt_theta_hyp(0.01, 6.0), Error);
    CHECK(std::isfinite(log_qt(0.01, std::cosh(6.0))));
}

TEST_CASE("complex-angle logarithm matches the real forms") {
    for (double t : {0.05, 0.5}) {
        for (double w : {0.2, 1.5, 2.8}) {
            auto l = log_qt_angle(t, {w, 0});
            CHECK(l.real() == Approx(std::log(qt_theta_trig(t, w).value)).epsilon(1e-12));
            CHECK(std::abs(l.imag()) < 1e-12);
            // even in w
            CHECK(std::abs(log_qt_angle(t, {-w, 0}) - l) < 1e-11);
        }
        auto l = log_qt_angle(t, {0, 1.1});
        CHECK(l.real() == Approx(std::log(qt_theta_hyp(t, 1.1).value)).epsilon(1e-12));
    }
}

TEST_CASE("unit mass on the normalized 3-sphere") {
    for (double t : {0.05, 0.3, 2.0}) {
        auto m = integrate([t](double w) { return qt(t, std::cos(w)).value * std::sin(w) * std::sin(w) * 2 / kPi; }, 0.0,
                           kPi, {1e-14, 1e-12, 2000});
        CHECK(m.value == Approx(1).epsilon(1e-10));
    }
}

TEST_CASE("heat equation on the sphere") {
    // d_t q = q'' + 2 cot(w) q'
    const double t = 0.4, h = 1e-4, dt = 1e-5;
    for (double w : {0.5, 1.4, 2.5}) {
        auto q = [&](double tt, double ww) { return qt(tt, std::cos(ww)).value; };
        double lhs = (q(t + dt, w) - q(t - dt, w)) / (2 * dt);
        double q1 = (q(t, w + h) - q(t, w - h)) / (2 * h);
        double q2 = (q(t, w + h) - 2 * q(t, w) + q(t, w - h)) / (h * h);
        CHECK(lhs == Approx(q2 + 2 / std::tan(w) * q1).epsilon(1e-5).margin(1e-6));
    }
}

TEST_CASE("dispatcher and domain") {
    CHECK(qt(1.0, 0.2).representation == QtRep::Spectral);
    CHECK(qt(0.1, 0.2).representation == QtRep::ThetaTrig);
    CHECK(qt(0.1, 1.5).representation == QtRep::ThetaHyp);
    CHECK_THROWS_AS(qt(0.0, 0.2), Error);
    CHECK_THROWS_AS(qt_spectral(1.0, 1.5), Error);
    CHECK_THROWS_AS(qt_theta_trig(1.0, 4.0), Error);
}
