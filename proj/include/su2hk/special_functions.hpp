#pragma once

#include <vector>

namespace su2hk {

struct PolyIndex {
    int k = 0;  // degree
    int n = 0;  // second Jacobi parameter
};

inline constexpr int kJacobiMaxK = 200;
inline constexpr int kJacobiMaxN = 4000;

// P_k^{(0,n)}(x), normalized so that P_k(1) = 1; three-term recurrence in k
double jacobi_p(PolyIndex idx, double x);
double jacobi_p_dx(PolyIndex idx, double x);
double jacobi_p_dxx(PolyIndex idx, double x);

// s * P_j^{(0,n)}(x) and its first two x-derivatives for j = 0..kmax.
// Output arrays must hold kmax + 1 entries; dp / ddp may be null.
void jacobi_row(int n, int kmax, double x, double s, double* p, double* dp, double* ddp);

// Chebyshev polynomial of the second kind, U_m(cos a) = sin((m+1)a) / sin a
double chebyshev_u(int m, double x);

}  // namespace su2hk
