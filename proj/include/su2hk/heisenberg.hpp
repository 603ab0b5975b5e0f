#pragma once

#include "su2hk/geometry.hpp"
#include "su2hk/quadrature.hpp"

namespace su2hk {

struct HeisPoint {
    double r = 0;  // >= 0
    double z = 0;
};

// Default accuracy for the lambda-integral; values are O(1/t^2).
inline QuadratureSpec heis_default_spec() { return {2e-15, 1e-12, 4000}; }

// h_t(r, z) = (1/8 pi^2) int_0^inf cos(lambda z / 2) (lambda / sinh lambda t) e^{-(r^2/4) lambda coth lambda t} d lambda
double gaveau_kernel(double t, HeisPoint p, const QuadratureSpec& spec = heis_default_spec());
// value and (r, z) derivatives up to second order, differentiated under the integral
Jet2 gaveau_jet(double t, HeisPoint p, const QuadratureSpec& spec = heis_default_spec());

// (d_r f)^2 + r^2 (d_z f)^2
double heis_gamma(const Jet2& j);

struct DilationProbe {
    double scaled = 0;  // t^2 p_t(sqrt(t) r, t z)
    double limit = 0;   // 2 pi^2 h_1(r, z)
    double abs_error = 0;
    double rel_error = 0;
};
DilationProbe dilation_probe(double t, double r, double z);
double dilation_limit_error(double t, double r, double z);

// Integrals over R^3 in cylindric coordinates (r dr dtheta dz), truncated at
// r <= r_max, |z| <= z_max.
struct HeisDomain {
    double r_max = 8;
    double z_max = 40;
    double rel_cut = 1e-12;  // integrand dropped where h_1 < rel_cut * h_1(0, 0)
};
double heis_mass(double t, const HeisDomain& d = {}, const QuadratureSpec& spec = {1e-12, 1e-9, 4000});
// (1/2) int h_1 Gamma(ln h_1)
double heis_fisher_constant(const HeisDomain& d = {}, const QuadratureSpec& spec = {1e-12, 1e-8, 4000});
// int r^q h_1 Gamma(ln h_1)^{q/2}
double heis_moment(double q, const HeisDomain& d = {}, const QuadratureSpec& spec = {1e-12, 1e-8, 4000});

}  // namespace su2hk
