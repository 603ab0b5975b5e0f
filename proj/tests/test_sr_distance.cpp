#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "su2hk/errors.hpp"
#include "su2hk/geometry.hpp"
#include "su2hk/sr_distance.hpp"
#include "su2hk/su2_kernel.hpp"

using namespace su2hk;
using Catch::Approx;

namespace {

double dist(const CylCoord& c) { return std::sqrt(cc_distance(c.r, c.z).d_squared); }

}  // namespace

TEST_CASE("horizontal points") {
    for (double r : {0.1, 0.8, 1.2, kPi / 2}) {
        auto d = cc_distance(r, 0);
        CHECK(d.d_squared == r * r);
        CHECK(d.theta_star == 0);
        CHECK_FALSE(d.on_cut_locus);
    }
}

TEST_CASE("cut locus and diameter") {
    auto d = cc_distance(0, kPi);
    CHECK(d.d_squared == Approx(kPi * kPi).epsilon(1e-15));
    CHECK(d.on_cut_locus);
    for (double z : {0.3, 1.0, -2.0}) CHECK(cc_distance(0, z).d_squared == Approx(2 * kPi * std::abs(z) - z * z));
    // a horizontal move of length r changes d by at most r
    for (double r : {2e-3, 0.05})
        for (double z : {0.5, 2.0}) {
            double d0 = std::sqrt(2 * kPi * z - z * z);
            CHECK(std::abs(std::sqrt(cc_distance(r, z).d_squared) - d0) <= r);
        }
}

TEST_CASE("theta* solves its equation") {
    for (double r : {0.05, 0.4, 1.0, 1.5})
        for (double z : {-3.0, -0.8, 0.2, 1.7, 3.1}) {
            double th = theta_star(r, z);
            CHECK(std::abs(theta_equation(r, z, th)) < 1e-12);
            CHECK(std::abs(cc_distance(r, z).residual) < 1e-12);
            CHECK(th * z >= 0);
        }
    CHECK(theta_star(0.5, kPi) == kPi);
    CHECK_THROWS_AS(theta_star(0, 1), Error);
}

TEST_CASE("distance agrees with the quotient form") {
    for (double r : {0.3, 0.9, 1.4})
        for (double z : {0.4, 1.5, -2.6}) {
            double th = theta_star(r, z);
            double q = std::pow((th - z) * std::tan(r) / std::sin(th), 2);
            CHECK(cc_distance(r, z).d_squared == Approx(q).epsilon(1e-10));
        }
}

TEST_CASE("distance bounds and symmetry") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 300; ++i) {
        double r = 0.01 + u(rng) * 1.55, z = -kPi + 2 * kPi * u(rng);
        double d2 = cc_distance(r, z).d_squared;
        CHECK(d2 >= r * r * (1 - 1e-14));
        CHECK(d2 <= kPi * kPi * (1 + 1e-14));
        CHECK(d2 == Approx(cc_distance(r, -z).d_squared).epsilon(1e-12));
    }
}

TEST_CASE("left-invariant distance obeys the triangle inequality") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    auto rnd = [&] { return CylCoord{0.02 + 1.5 * u(rng), 2 * kPi * u(rng), -kPi + 2 * kPi * u(rng)}; };
    for (int i = 0; i < 300; ++i) {
        CylCoord a = rnd(), b = rnd();
        CylCoord ab = left_translate(to_matrix(a), b);
        CHECK(dist(ab) <= dist(a) + dist(b) + 1e-9);
    }
}

TEST_CASE("small-time asymptotics off the cut locus") {
    for (auto [r, z] : {std::pair{0.8, 0.5}, std::pair{1.0, 0.0}}) {
        double ratio = pt(0.02, r, z).value / small_time_asymptotic(0.02, r, z);
        CHECK(ratio > 0.95);
        CHECK(ratio < 1.05);
    }
    CHECK(curvature_factor(0.8, 0.5) > 0);
    CHECK_THROWS_AS(small_time_asymptotic(0.02, 0, 1), Error);
}

TEST_CASE("log limit approaches d^2 from below as t decreases") {
    double r = 0.8, z = 0.5, d2 = cc_distance(r, z).d_squared;
    double prev = 0;
    for (double t : {0.05, 0.02, 0.01}) {
        double v = loglimit_distance(t, r, z);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev < 1.2 * d2);
}
