#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "su2hk/errors.hpp"
#include "su2hk/geometry.hpp"

using namespace su2hk;
using Catch::Approx;

namespace {

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

CylCoord random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    return {0.01 + u(rng) * (kPi / 2 - 0.02), u(rng) * 2 * kPi, -kPi + u(rng) * 2 * kPi};
}

}  // namespace

TEST_CASE("chart round trip") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        CylCoord c = random_point(rng);
        GroupElement g = to_matrix(c);
        CHECK(g.unitarity_defect() < 1e-14);
        CHECK(std::abs(g.det() - 1.0) < 1e-14);
        CylCoord b = from_matrix(g);
        CHECK(b.r == Approx(c.r).margin(1e-13));
        CHECK(reduce_angle(b.z - c.z) == Approx(0).margin(1e-12));
        CHECK(reduce_angle(b.theta - c.theta) == Approx(0).margin(1e-12));
    }
}

TEST_CASE("identity and the degenerate edge of the chart") {
    CylCoord e = from_matrix(GroupElement::identity());
    CHECK(e.r == 0);
    CHECK(e.z == 0);
    GroupElement g;
    g.m << 0, 1, -1, 0;
    bool deg = false;
    CylCoord c = from_matrix(g, &deg);
    CHECK(deg);
    CHECK(c.r == Approx(kPi / 2));
    CHECK_THROWS_AS(from_matrix_checked(g), Error);
}

TEST_CASE("Pauli-type generators satisfy [X, Y] = 2Z") {
    Mat2 X = pauli::X(), Y = pauli::Y(), Z = pauli::Z();
    CHECK(max_abs(X * Y - Y * X - 2.0 * Z) < 1e-15);
    CHECK(max_abs(Y * Z - Z * Y - 2.0 * X) < 1e-15);
    CHECK(max_abs(Z * X - X * Z - 2.0 * Y) < 1e-15);
}

TEST_CASE("reprojection restores unitarity") {
    GroupElement g = to_matrix({0.7, 1.1, -0.4});
    g.m *= 1.0 + 1e-6;
    g.m(0, 1) += 1e-7;
    g.reproject();
    CHECK(g.unitarity_defect() < 1e-15);
}

TEST_CASE("Haar integrals of simple functions") {
    QuadratureSpec spec{1e-14, 1e-12, 2000};
    auto one = haar_integrate_rz([](double, double) { return 1.0; }, spec);
    CHECK(one.value == Approx(1).epsilon(1e-13));
    // int cos^2 r = 1/2, int |a11|^4 = 1/3 on SU(2)
    auto c2 = haar_integrate_rz([](double r, double) { return std::pow(std::cos(r), 2); }, spec);
    CHECK(c2.value == Approx(0.5).epsilon(1e-12));
    auto c4 = haar_integrate_rz([](double r, double) { return std::pow(std::cos(r), 4); }, spec);
    CHECK(c4.value == Approx(1.0 / 3).epsilon(1e-12));
    auto m = haar_integrate([](double r, double th, double z) { return std::sin(r) * std::cos(th - z); }, spec);
    CHECK(std::abs(m.value) < 1e-13);
}

TEST_CASE("Haar measure is left invariant") {
    QuadratureSpec spec{1e-13, 1e-10, 2000};
    auto f = [](double r, double th, double z) {
        return std::pow(std::cos(r), 2) * (1 + std::cos(2 * z)) + std::sin(r) * std::cos(th - z) + 0.3;
    };
    GroupElement g = to_matrix({0.6, 0.4, 1.3});
    auto base = haar_integrate(f, spec);
    auto moved = haar_integrate(
        [&](double r, double th, double z) {
            CylCoord c = left_translate(g, {r, th, z});
            return f(c.r, c.theta, c.z);
        },
        spec, 48);
    CHECK(moved.value == Approx(base.value).epsilon(1e-9));
}

TEST_CASE("Gamma, Gamma2 and the sub-Laplacian on cos r cos z") {
    for (double r : {0.2, 0.7, 1.3})
        for (double z : {-2.0, 0.0, 0.9}) {
            double cr = std::cos(r), sr = std::sin(r), cz = std::cos(z), sz = std::sin(z);
            Jet2 j{r, z, cr * cz, -sr * cz, -cr * sz, -cr * cz, sr * sz, -cr * cz};
            CHECK(gamma(j) == Approx(sr * sr).epsilon(1e-14));
            CHECK(sublaplacian(j) == Approx(-2 * cr * cz).margin(1e-14));
            // Bochner: Gamma2 = (1/2) L Gamma(f) - Gamma(f, Lf) = 2 cos^2 r
            CHECK(gamma2(j) == Approx(2 * cr * cr).epsilon(1e-13));
        }
}

TEST_CASE("log jet matches differences") {
    auto f = [](double r, double z) { return 2 + std::cos(r) * std::cos(z) + 0.3 * std::sin(r) * std::sin(r); };
    double r = 0.6, z = 0.4, h = 1e-4;
    double cr = std::cos(r), sr = std::sin(r), cz = std::cos(z), sz = std::sin(z);
    Jet2 j{r, z, f(r, z), -sr * cz + 0.6 * sr * cr, -cr * sz, -cr * cz + 0.6 * std::cos(2 * r), sr * sz, -cr * cz};
    Jet2 l = log_jet(j);
    auto lf = [&](double a, double b) { return std::log(f(a, b)); };
    CHECK(l.fr == Approx((lf(r + h, z) - lf(r - h, z)) / (2 * h)).epsilon(1e-7));
    CHECK(l.fz == Approx((lf(r, z + h) - lf(r, z - h)) / (2 * h)).epsilon(1e-7));
    CHECK(l.frr == Approx((lf(r + h, z) - 2 * lf(r, z) + lf(r - h, z)) / (h * h)).epsilon(1e-5));
    CHECK(l.frz ==
          Approx((lf(r + h, z + h) - lf(r + h, z - h) - lf(r - h, z + h) + lf(r - h, z - h)) / (4 * h * h)).epsilon(1e-5));
    CHECK(l.fzz == Approx((lf(r, z + h) - 2 * lf(r, z) + lf(r, z - h)) / (h * h)).epsilon(1e-5));
}

TEST_CASE("chart operators reject the boundary") {
    Jet2 j{kPi / 2, 0, 1, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(gamma2(j), Error);
    CHECK_THROWS_AS(sublaplacian(j), Error);
    Jet2 neg{0.5, 0, -1, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(log_jet(neg), Error);
}

TEST_CASE("reduce_angle") {
    CHECK(reduce_angle(3 * kPi + 0.1) == Approx(-kPi + 0.1));
    CHECK(reduce_angle(-0.5) == -0.5);
}
