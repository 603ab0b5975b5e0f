#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <numbers>

#include "su2hk/quadrature.hpp"

namespace su2hk {

inline constexpr double kPi = std::numbers::pi;

// z reduced to [-pi, pi] by the nearest multiple of 2 pi
double reduce_angle(double z);

struct CylCoord {
    double r = 0;      // [0, pi/2]
    double theta = 0;  // [0, 2 pi)
    double z = 0;      // [-pi, pi]
};

using Mat2 = Eigen::Matrix2cd;

struct GroupElement {
    Mat2 m = Mat2::Identity();

    static GroupElement identity() { return {}; }
    GroupElement operator*(const GroupElement& o) const { return {m * o.m}; }
    GroupElement inverse() const { return {m.adjoint()}; }
    double unitarity_defect() const;  // max |g^* g - I|
    std::complex<double> det() const { return m.determinant(); }
    // project back onto SU(2) using the structure [[a, b], [-conj b, conj a]]
    void reproject();
};

namespace pauli {
Mat2 X();
Mat2 Y();
Mat2 Z();
}  // namespace pauli

GroupElement to_matrix(const CylCoord& c);
// r = atan2(|a12|, |a11|), z = arg a11, theta = arg a12 + z.
// At r = 0 theta is set to 0; at r = pi/2 z is set to 0 and *degenerate is raised.
CylCoord from_matrix(const GroupElement& g, bool* degenerate = nullptr);
// Same, but throws DEGENERATE_CHART instead of flagging.
CylCoord from_matrix_checked(const GroupElement& g);
// chart coordinates of g * h
CylCoord left_translate(const GroupElement& g, const CylCoord& h);

struct Jet2 {
    double r = 0, z = 0;  // evaluation point
    double f = 0, fr = 0, fz = 0, frr = 0, frz = 0, fzz = 0;
};

// (d_r f)^2 + tan^2 r (d_z f)^2
double gamma(const Jet2& j);
// (f_rr)^2 + (tan^2 r f_zz - 2 f_r / sin 2r)^2 + 2 (f_z / cos^2 r + tan r f_rz)^2
double gamma2(const Jet2& j);
// sub-Laplacian of a theta-independent function
double sublaplacian(const Jet2& j);
// jet of ln f (f > 0)
Jet2 log_jet(const Jet2& j);

// d(mu) = sin(2r) dr dtheta dz / (4 pi^2); after the theta integral the weight is sin(2r)/(2 pi).
inline double haar_weight_rz(double r) { return std::sin(2 * r) / (2 * kPi); }

// Integral over the chart of a theta-independent field f(r, z).
// Inner z-integrals are split at z = 0; `even_in_z` folds onto [0, pi].
template <class F>
auto haar_integrate_rz(F&& f, const QuadratureSpec& spec, bool even_in_z = false)
    -> QuadResult<decltype(f(0.0, 0.0))> {
    using T = decltype(f(0.0, 0.0));
    spec.validate();
    QuadratureSpec inner = spec;
    inner.abs_tol = spec.abs_tol;
    inner.rel_tol = 0.5 * spec.rel_tol;
    double inner_err = 0;
    int evals = 0;
    auto outer = [&](double r) -> T {
        auto g = [&](double z) { return f(r, z); };
        QuadResult<T> q;
        if (even_in_z) {
            q = integrate(g, 0.0, kPi, inner);
            q.value = q.value * 2.0;
            q.abs_err *= 2;
        } else {
            q = integrate(g, -kPi, kPi, inner, {0.0});
        }
        inner_err = std::max(inner_err, q.abs_err);
        evals += q.evals;
        return q.value * haar_weight_rz(r);
    };
    QuadratureSpec o = spec;
    auto res = integrate(outer, 0.0, kPi / 2, o);
    res.abs_err += inner_err / (2 * kPi);
    res.evals = evals;
    return res;
}

// Full integral over SU(2) of f(r, theta, z); theta by the periodic trapezoid rule
// with n_theta nodes (spectrally accurate for smooth periodic integrands).
template <class F>
auto haar_integrate(F&& f, const QuadratureSpec& spec, int n_theta = 32)
    -> QuadResult<decltype(f(0.0, 0.0, 0.0))> {
    using T = decltype(f(0.0, 0.0, 0.0));
    if (n_theta < 1) throw Error(ErrorCode::DomainError, "n_theta must be positive");
    auto rz = [&](double r, double z) -> T {
        T s(0.0);
        for (int i = 0; i < n_theta; ++i) s += f(r, 2 * kPi * i / n_theta, z);
        return s * (1.0 / n_theta);
    };
    return haar_integrate_rz(rz, spec, false);
}

}  // namespace su2hk
