#include <catch2/catch_amalgamated.hpp>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/jacobi.hpp>

#include <cmath>
#include <vector>

#include "su2hk/errors.hpp"
#include "su2hk/special_functions.hpp"

using namespace su2hk;
using Catch::Approx;

namespace {

// explicit finite sum for P_k^{(0,n)}
double jacobi_sum(int k, int n, double x) {
    using boost::math::binomial_coefficient;
    double s = 0;
    for (int j = 0; j <= k; ++j)
        s += binomial_coefficient<double>(k, k - j) * binomial_coefficient<double>(k + n, j) *
             std::pow((x - 1) / 2, j) * std::pow((x + 1) / 2, k - j);
    return s;
}

}  // namespace

TEST_CASE("low-order values") {
    CHECK(jacobi_p({0, 5}, 0.3) == 1);
    CHECK(jacobi_p({1, 2}, 0.0) == Approx(-1));  // ((n+2)x - n)/2
    CHECK(jacobi_p_dx({1, 2}, 0.0) == Approx(2));
    for (int k = 0; k < 30; ++k) CHECK(jacobi_p({k, 7}, 1.0) == Approx(1));
}

TEST_CASE("recurrence matches the explicit sum and boost") {
    for (int n : {0, 1, 3, 10})
        for (int k : {0, 1, 2, 5, 12})
            for (double x : {-0.9, -0.2, 0.4, 0.95}) {
                double v = jacobi_p({k, n}, x);
                CHECK(v == Approx(jacobi_sum(k, n, x)).margin(1e-11));
                CHECK(v == Approx(boost::math::jacobi(k, 0.0, double(n), x)).margin(1e-11));
            }
}

TEST_CASE("derivatives match differences") {
    const double h = 1e-5;
    for (int n : {0, 4})
        for (int k : {1, 3, 8})
            for (double x : {-0.5, 0.1, 0.7}) {
                double fd1 = (jacobi_p({k, n}, x + h) - jacobi_p({k, n}, x - h)) / (2 * h);
                double fd2 = (jacobi_p_dx({k, n}, x + h) - jacobi_p_dx({k, n}, x - h)) / (2 * h);
                CHECK(jacobi_p_dx({k, n}, x) == Approx(fd1).epsilon(1e-7).margin(1e-7));
                CHECK(jacobi_p_dxx({k, n}, x) == Approx(fd2).epsilon(1e-7).margin(1e-6));
            }
}

TEST_CASE("scaled row equals scaled polynomials") {
    const int n = 6, kmax = 9;
    std::vector<double> p(kmax + 1), dp(kmax + 1), ddp(kmax + 1);
    jacobi_row(n, kmax, 0.35, 2.5, p.data(), dp.data(), ddp.data());
    for (int k = 0; k <= kmax; ++k) {
        CHECK(p[k] == Approx(2.5 * jacobi_p({k, n}, 0.35)));
        CHECK(dp[k] == Approx(2.5 * jacobi_p_dx({k, n}, 0.35)).margin(1e-12));
        CHECK(ddp[k] == Approx(2.5 * jacobi_p_dxx({k, n}, 0.35)).margin(1e-11));
    }
}

TEST_CASE("Wigner bound |cos^n(r) P_k(cos 2r)| <= 1") {
    for (int n : {0, 1, 5, 40})
        for (int k : {0, 3, 17, 60})
            for (double r = 0; r <= 1.5708; r += 0.05)
                CHECK(std::abs(std::pow(std::cos(r), n) * jacobi_p({k, n}, std::cos(2 * r))) <= 1 + 1e-12);
}

TEST_CASE("caps and domain") {
    CHECK_THROWS_AS(jacobi_p({kJacobiMaxK + 1, 0}, 0.1), Error);
    CHECK_THROWS_AS(jacobi_p({0, kJacobiMaxN + 1}, 0.1), Error);
    CHECK_THROWS_AS(jacobi_p({-1, 0}, 0.1), Error);
    try {
        jacobi_p({kJacobiMaxK + 1, 0}, 0.1);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TruncationCap);
    }
}

TEST_CASE("Chebyshev U") {
    for (int m : {0, 1, 4, 11})
        for (double a : {0.3, 1.2, 2.9}) CHECK(chebyshev_u(m, std::cos(a)) == Approx(std::sin((m + 1) * a) / std::sin(a)));
    CHECK(chebyshev_u(5, 1.0) == Approx(6));
    CHECK(chebyshev_u(5, -1.0) == Approx(-6));
}
