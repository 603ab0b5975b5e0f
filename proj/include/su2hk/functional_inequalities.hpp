#pragma once

#include <functional>
#include <string>
#include <vector>

#include "su2hk/geometry.hpp"
#include "su2hk/quadrature.hpp"
#include "su2hk/su2_kernel.hpp"

namespace su2hk {

struct VerifyReport {
    std::string name;
    double min_margin = 0;
    double t = 0, r = 0, z = 0;  // argmin
    long n_points = 0;
    long n_violations = 0;
    double tol = 1e-9;
    double lhs = 0, rhs = 0;  // at the argmin

    void add(double margin, double tt, double rr, double zz, double l, double rh);
    void merge(const VerifyReport& o);
};

// A(t) = (1/2) sum lambda (2k+|n|+1) e^{-2 lambda t}
double a_const(double t);
// C(t) = (1/2) int Gamma(p_t) / p_t dmu
double c_const(double t, const QuadratureSpec& spec = {1e-12, 1e-8, 4000});

struct TestFunction {
    std::string name;
    std::function<double(double r, double theta, double z)> f;
    bool eigen = false;     // L f = -eigenvalue * (f - f_mean)
    double eigenvalue = 0;  // so that P_t f = f_mean + e^{-eigenvalue t} (f - f_mean)
    double mean = 0;
    bool theta_independent = true;
    std::function<double(double t)> heat_shift;  // set when f = p_s: returns s
};

namespace testfn {
TestFunction constant(double c = 1);
TestFunction f1();  // cos r cos z
TestFunction f2();  // 2 + cos r cos z
TestFunction f3(double s = 0.2);  // p_s
TestFunction f4();  // sin r cos(theta - z), the real part of a12
TestFunction shifted_f1(double dz = 0.5);  // cos r cos(z - dz)
// h -> f(g h) for the fixed element g = (r, theta, z)
TestFunction translated(const TestFunction& f, CylCoord g = {0.5, 0, 0.5});
TestFunction sum(const TestFunction& a, const TestFunction& b, double wb = 1);
std::vector<TestFunction> builtins();
}  // namespace testfn

// horizontal gradient at the identity, (X f)(e)^2 + (Y f)(e)^2, by differences along exp(sX), exp(sY)
double gamma_at_identity(const TestFunction& f, double h = 1e-4);

struct IdentityAction {
    double pt_f = 0;     // P_t f(e)
    double pt_f2 = 0;    // P_t f^2(e)
    double gamma = 0;    // Gamma(P_t f)(e)
    double mean = 0;     // int f dmu
    double mean_sq = 0;  // int f^2 dmu
};
// P_t actions at the identity by Haar quadrature against p_t; the gradient uses
// right-invariant derivatives of p_t.
IdentityAction identity_action(const TestFunction& f, double t, const QuadratureSpec& spec = {1e-12, 1e-9, 4000},
                               int n_theta = 32);

VerifyReport first_gradient_bound_check(const TestFunction& f, double t, double tol = 1e-9);
VerifyReport reverse_poincare_check(const TestFunction& f, double t, double tol = 1e-9);
VerifyReport reverse_poincare_check(const TestFunction& f, double t, double c_of_t, double tol);

struct SharpnessProbe {
    double max_ratio = 0;
    std::vector<double> coefficients;  // on {1, Re a11, Im a11, Re a12, Im a12}
};
// max of Gamma(P_t f)(e) / (C(t) Var_{p_t}(f)) over a coefficient grid
SharpnessProbe near_sharpness_probe(double t, int n_grid = 5);

struct ChartGrid {
    std::vector<double> r, z;
    static ChartGrid interior(int nr, int nz);  // cell midpoints on (0, pi/2) x (-pi, pi)
};

// jets of P_t p_s = p_{t+s} on a grid
struct KernelJets {
    double t = 0, s = 0;
    ChartGrid grid;
    std::vector<Jet2> jets;  // row-major over (r, z)
};
KernelJets kernel_jets(double t, double s, const ChartGrid& g);

VerifyReport li_yau_check(const KernelJets& kj, double alpha, double tol = 1e-9);
VerifyReport li_yau_check(double t, double alpha, const ChartGrid& g, double s = 1e-3);
VerifyReport li_yau_exponential_check(const KernelJets& kj, double alpha, double tol = 1e-9);
VerifyReport li_yau_exponential_check(double t, double alpha, const ChartGrid& g, double s = 1e-3);
// right-hand side constant ((3 alpha - 1)^2 / (alpha - 2)) / t
double li_yau_constant_term(double t, double alpha);

struct HarnackSample {
    double ratio = 0;           // p_{t1}(g1) / p_{t2}(g2)
    double log_ratio = 0;
    double log_time_ratio = 0;  // ln(t2 / t1)
    double delta2_over_dt = 0;  // d(g1^{-1} g2)^2 / (t2 - t1)
};
HarnackSample harnack_ratio(double t1, double t2, const CylCoord& p1, const CylCoord& p2);
struct HarnackFit {
    double a1 = 0, a2 = 0;
    bool feasible = false;
};
// smallest A1 + A2 >= 0 with ln ratio <= A1 ln(t2/t1) + A2 delta^2/(t2-t1) on every sample
HarnackFit harnack_fit(const std::vector<HarnackSample>& s);

// sqrt(Gamma(ln p_t)) / (d / t + 1 / sqrt t)
double grad_log_kernel_ratio(double t, double r, double z);

struct LpProbe {
    double lhs = 0;          // sqrt(Gamma(P_t f1)) at r = pi/2
    double rhs_over_cp = 0;  // e^{-2t} (P_t sin^p r)^{1/p} at the same point
    double ratio = 0;        // lhs / rhs_over_cp, a lower bound for C_p
    double moment = 0;       // int sin^p r dmu
    double limit_ratio = 0;  // moment^{-1/p}, the t -> infinity value of ratio
};
LpProbe lp_bound_probe(double p, double t, const QuadratureSpec& spec = {1e-12, 1e-10, 4000});

// int (sin 2r)^q Gamma(ln p_t)^{q/2} p_t dmu
double lemma_limit_moment(double q, double t, const QuadratureSpec& spec = {1e-12, 1e-8, 4000});

}  // namespace su2hk
