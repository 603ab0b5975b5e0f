#include "su2hk/sr_distance.hpp"

#include <cmath>

#include "su2hk/errors.hpp"
#include "su2hk/geometry.hpp"
#include "su2hk/su2_kernel.hpp"

namespace su2hk {

namespace {

struct UParts {
    double u, om, acos_u;  // om = 1 - u^2 computed without cancellation
};

UParts u_parts(double r, double theta) {
    double cr = std::cos(r), sr = std::sin(r), st = std::sin(theta);
    double u = cr * std::cos(theta);
    double om = sr * sr + cr * cr * st * st;
    return {u, om, std::atan2(std::sqrt(om), u)};
}

}  // namespace

double theta_equation(double r, double z, double theta) {
    UParts p = u_parts(r, theta);
    double rhs = p.om > 0 ? std::cos(r) * std::sin(theta) * p.acos_u / std::sqrt(p.om) : 0.0;
    return theta - z - rhs;
}

double theta_star(double r, double z) {
    if (!(r > 0 && r <= kPi / 2)) throw Error(ErrorCode::DomainError, "theta_star needs 0 < r <= pi/2");
    if (z == 0) return 0;
    if (std::abs(z) == kPi) return z;  // F(+-pi) = 0 there, up to the rounding of sin(pi)
    double a = -kPi, b = kPi;
    double fa = theta_equation(r, z, a), fb = theta_equation(r, z, b);
    if (fa * fb > 0) throw Error(ErrorCode::NoBracket, "F(-pi) and F(pi) have the same sign");
    if (fa == 0) return a;
    if (fb == 0) return b;
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        if (theta_equation(r, z, m) < 0)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

DistanceResult cc_distance(double r, double z, double r_min) {
    if (!(r >= 0 && r <= kPi / 2)) throw Error(ErrorCode::DomainError, "r must lie in [0, pi/2]");
    z = reduce_angle(z);
    DistanceResult d;
    if (z == 0) {
        d.d_squared = r * r;
        d.on_cut_locus = r < r_min;
        return d;
    }
    if (r < r_min) {
        d.on_cut_locus = true;
        d.theta_star = std::copysign(kPi, z);
        d.d_squared = 2 * kPi * std::abs(z) - z * z;
        return d;
    }
    d.theta_star = theta_star(r, z);
    d.residual = theta_equation(r, z, d.theta_star);
    UParts p = u_parts(r, d.theta_star);
    double sr = std::sin(r);
    d.d_squared = p.acos_u * p.acos_u * sr * sr / p.om;
    return d;
}

double curvature_factor(double r, double z) {
    double th = theta_star(r, reduce_angle(z));
    UParts p = u_parts(r, th);
    return 1 - p.u * p.acos_u / std::sqrt(p.om);
}

double small_time_asymptotic(double t, double r, double z) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    if (!(r > 0 && r < kPi / 2)) throw Error(ErrorCode::DomainError, "off-cut-locus asymptotics need 0 < r < pi/2");
    z = reduce_angle(z);
    double th = theta_star(r, z);
    UParts p = u_parts(r, th);
    double k = 1 - p.u * p.acos_u / std::sqrt(p.om);
    if (!(k > 0)) throw Error(ErrorCode::NegativeCurvatureTerm, "1 - u arccos(u)/sqrt(1-u^2) is not positive");
    double sr = std::sin(r);
    double d2 = p.acos_u * p.acos_u * sr * sr / p.om;
    return (1 / sr) * p.acos_u / std::sqrt(k) * std::sqrt(kPi) * std::exp(-d2 / (4 * t)) / (4 * t * std::sqrt(t));
}

double loglimit_distance(double t, double r, double z) {
    KernelEval e = pt(t, r, z);
    return -4 * t * std::log(e.value);
}

}  // namespace su2hk
