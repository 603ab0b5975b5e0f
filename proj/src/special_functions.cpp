#include "su2hk/special_functions.hpp"

#include <string>

#include "su2hk/errors.hpp"

namespace su2hk {

namespace {

void check_caps(int n, int k) {
    if (k < 0 || n < 0) throw Error(ErrorCode::DomainError, "Jacobi indices must be nonnegative");
    if (k > kJacobiMaxK || n > kJacobiMaxN)
        throw Error(ErrorCode::TruncationCap,
                    "Jacobi index beyond caps (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
}

}  // namespace

void jacobi_row(int n, int kmax, double x, double s, double* p, double* dp, double* ddp) {
    check_caps(n, kmax);
    const double beta = n;
    p[0] = s;
    if (dp) dp[0] = 0;
    if (ddp) ddp[0] = 0;
    if (kmax == 0) return;
    p[1] = s * 0.5 * ((n + 2) * x - n);
    if (dp) dp[1] = s * 0.5 * (n + 2);
    if (ddp) ddp[1] = 0;
    for (int k = 2; k <= kmax; ++k) {
        double m = 2.0 * k + beta;
        double a = 2.0 * k * (k + beta) * (m - 2);
        double bs = (m - 1) * m * (m - 2);  // d b / dx
        double b = (m - 1) * (m * (m - 2) * x - beta * beta);
        double c = 2.0 * (k - 1) * (k + beta - 1) * m;
        p[k] = (b * p[k - 1] - c * p[k - 2]) / a;
        if (dp) dp[k] = (b * dp[k - 1] + bs * p[k - 1] - c * dp[k - 2]) / a;
        if (ddp) ddp[k] = (b * ddp[k - 1] + 2 * bs * dp[k - 1] - c * ddp[k - 2]) / a;
    }
}

double jacobi_p(PolyIndex idx, double x) {
    check_caps(idx.n, idx.k);
    std::vector<double> p(idx.k + 1);
    jacobi_row(idx.n, idx.k, x, 1.0, p.data(), nullptr, nullptr);
    return p[idx.k];
}

double jacobi_p_dx(PolyIndex idx, double x) {
    check_caps(idx.n, idx.k);
    std::vector<double> p(idx.k + 1), dp(idx.k + 1);
    jacobi_row(idx.n, idx.k, x, 1.0, p.data(), dp.data(), nullptr);
    return dp[idx.k];
}

double jacobi_p_dxx(PolyIndex idx, double x) {
    check_caps(idx.n, idx.k);
    std::vector<double> p(idx.k + 1), dp(idx.k + 1), ddp(idx.k + 1);
    jacobi_row(idx.n, idx.k, x, 1.0, p.data(), dp.data(), ddp.data());
    return ddp[idx.k];
}

double chebyshev_u(int m, double x) {
    if (m < 0) throw Error(ErrorCode::DomainError, "Chebyshev order must be nonnegative");
    double u0 = 1, u1 = 2 * x;
    if (m == 0) return u0;
    for (int j = 1; j < m; ++j) {
        double u2 = 2 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

}  // namespace su2hk
