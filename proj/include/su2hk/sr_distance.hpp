#pragma once

namespace su2hk {

struct DistanceResult {
    double theta_star = 0;  // [-pi, pi]
    double d_squared = 0;
    double residual = 0;  // F(theta_star)
    bool on_cut_locus = false;
};

// F(theta) = theta - z - cos r sin theta arccos(u) / sqrt(1 - u^2), u = cos r cos theta
double theta_equation(double r, double z, double theta);
// unique root of F on [-pi, pi], by bisection
double theta_star(double r, double z);
// squared Carnot-Caratheodory distance from the identity; closed form 2 pi |z| - z^2 below r_min
DistanceResult cc_distance(double r, double z, double r_min = 1e-3);
// leading small-time term of p_t off the cut locus
double small_time_asymptotic(double t, double r, double z);
// 1 - u arccos(u) / sqrt(1 - u^2) at u = u(r, z); must be positive
double curvature_factor(double r, double z);
// -4 t ln p_t(r, z)
double loglimit_distance(double t, double r, double z);

}  // namespace su2hk
