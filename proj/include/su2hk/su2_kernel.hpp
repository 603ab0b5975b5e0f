#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "su2hk/geometry.hpp"
#include "su2hk/quadrature.hpp"
#include "su2hk/special_functions.hpp"

namespace su2hk {

enum class KernelRep { Spectral, Integral, CutlocusClosed };
const char* to_string(KernelRep r);

struct KernelConfig {
    double eps = 1e-13;             // spectral truncation target (absolute)
    double t_cross = 0.35;          // spectral for t >= t_cross
    double r_min = 1e-3;            // cut-locus closed form below
    double t_min_spectral = 0.01;
    QuadratureSpec quad{1e-300, 1e-12, 20000};  // integral representation (relative)
};

struct TruncationPlan {
    int n_max = 0;
    int k_max = 0;
    double eps = 0;
    double achieved_bound = 0;
    std::vector<int> k_per_n;  // k_per_n[n] = last k kept in row n
};

struct KernelEval {
    double value = 0;
    double abs_err = 0;
    KernelRep representation = KernelRep::Spectral;
};

// Truncated double series for one t. With `jets` the plan also bounds the
// tails of first and second derivatives.
class SpectralKernel {
public:
    SpectralKernel(double t, double eps, bool jets = false);

    struct Slice {
        double r = 0;
        bool has_jets = false;
        std::vector<double> a, ar, arr;  // n-th cosine coefficient and its r-derivatives
        double abs_sum = 0;               // sum of |terms|, for the roundoff estimate
    };

    double t() const { return t_; }
    const TruncationPlan& plan() const { return plan_; }
    Slice slice(double r, bool jets = false) const;
    KernelEval value(const Slice& s, double z) const;
    Jet2 jet(const Slice& s, double z) const;
    KernelEval value(double r, double z) const { return value(slice(r), z); }
    Jet2 jet(double r, double z) const { return jet(slice(r, true), z); }

private:
    double t_;
    bool jets_;
    TruncationPlan plan_;
    std::vector<std::size_t> offset_;  // row n starts at coef_[offset_[n]]
    std::vector<double> coef_;         // (2k+n+1) e^{-lambda t}
};

// Shared per-thread cache keyed on (t, eps, jets).
std::shared_ptr<const SpectralKernel> spectral_kernel(double t, double eps, bool jets = false);

// Evaluator that memoizes the last r slice; for nested quadrature over z at fixed r.
// Relative: pointwise accuracy, the dispatcher's choice below t_cross.
// Absolute: spectral slices whenever t >= t_min_spectral; enough for integrals against p_t.
class KernelField {
public:
    enum class Accuracy { Relative, Absolute };
    explicit KernelField(double t, const KernelConfig& cfg = {}, Accuracy acc = Accuracy::Relative);
    KernelField(double t, Accuracy acc) : KernelField(t, KernelConfig{}, acc) {}
    double operator()(double r, double z);
    KernelEval eval(double r, double z);
    Jet2 jet(double r, double z);

private:
    bool spectral_ok() const;
    const SpectralKernel::Slice& slice(double r, bool jets);

    double t_;
    KernelConfig cfg_;
    Accuracy acc_;
    std::shared_ptr<const SpectralKernel> sk_;
    SpectralKernel::Slice slice_;
    bool have_slice_ = false;
};

KernelEval pt_spectral(double t, double r, double z, double eps = 1e-13,
                       double t_min_spectral = 0.01);
Jet2 pt_spectral_jet(double t, double r, double z, double eps = 1e-13,
                     double t_min_spectral = 0.01);

// Integral over the real line of the Gaussian against q_t(cos r cosh y), taken
// on the horizontal line through the saddle point so that nothing cancels.
KernelEval pt_integral(double t, double r, double z, const QuadratureSpec& spec = KernelConfig{}.quad,
                       double r_min = 1e-3);
// Details of the last integral evaluation, for diagnostics.
struct IntegralDiagnostics {
    double theta_star = 0;
    double v_max = 0;
    double imag_residual = 0;
    double l1_norm = 0;  // integral of |integrand| relative to the value
    int evals = 0;
};
KernelEval pt_integral_diag(double t, double r, double z, const QuadratureSpec& spec,
                            IntegralDiagnostics* diag, double r_min = 1e-3);

// Closed form on the axis r = 0.
KernelEval pt_cutlocus(double t, double z);

KernelEval pt(double t, double r, double z, const KernelConfig& cfg = {});
// Derivatives in (r, z) from the best available representation
Jet2 pt_jet(double t, double r, double z, const KernelConfig& cfg = {});

struct DiagonalForms {
    double spectral = 0;  // NaN when t < t_min_spectral
    double theta = 0;
    double value = 0;
};
DiagonalForms pt_diagonal_forms(double t);
double pt_diagonal(double t);

// (1/8 pi) (1 - 2 cos r cos z + cos^2 r)^{-1/2}. This is normalized for the
// Riemannian volume of the unit 3-sphere (2 pi^2), not for the probability Haar measure.
double green_function(double r, double z);
inline constexpr double kVolS3 = 2 * kPi * kPi;

struct TimeIntegral {
    double raw = 0;         // int_0^inf e^{-t - lambda/t} p_t dt
    double normalized = 0;  // raw / (2 pi^2)
    double abs_err = 0;     // of normalized
};
TimeIntegral laplace_time_integral(double lambda, double r, double z, const QuadratureSpec& spec = {},
                                   const KernelConfig& cfg = {});

struct LaplaceCheck {
    double lhs = 0;       // time integral divided by 2 pi^2
    double lhs_raw = 0;
    double rhs = 0;       // int dy / (8 pi^2 (cosh sqrt(y^2 + 4 lambda) - cos r cos(z + i y)))
    double rhs_imag = 0;
    double rel_diff = 0;
};
LaplaceCheck laplace_check(double lambda, double r, double z, const QuadratureSpec& spec = {});

// Series of p_t(r, z + 4 i t) with the n = 0, k = 0 term removed.
std::complex<double> pt_star_shifted(double t, double r, double z, double eps = 1e-15);
// sup over the grid of |p*_t| / p_t
double phi_ratio(double t, const std::vector<double>& rs, const std::vector<double>& zs);

}  // namespace su2hk
