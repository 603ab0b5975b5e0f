#include "su2hk/heisenberg.hpp"

#include <cmath>

#include "su2hk/errors.hpp"
#include "su2hk/su2_kernel.hpp"

namespace su2hk {

namespace {

struct LambdaTerms {
    double k;   // lambda / sinh(lambda t)
    double lc;  // lambda coth(lambda t)
};

LambdaTerms lambda_terms(double t, double lam) {
    double x = lam * t;
    if (x < 1e-4) {
        double x2 = x * x;
        return {(1 - x2 / 6) / t, (1 + x2 / 3) / t};
    }
    return {2 * lam * std::exp(-x) / -std::expm1(-2 * x), lam / std::tanh(x)};
}

// cut-off where 2 lambda e^{-lambda (t + r^2/4)} (1 + lambda^2) drops below e^{-45} of its start
double lambda_max(double t, double r) {
    double rate = t + r * r / 4;
    double L = 45 / rate;
    for (int i = 0; i < 6; ++i) L = (45 + std::log(2 * L * (1 + L * L) * t)) / rate;
    return std::max(L, 1.0 / rate);
}

std::vector<double> lambda_breaks(double L, double z) {
    std::vector<double> b;
    double w = L / 8;
    if (z != 0) w = std::min(w, 8 * kPi / std::abs(z));
    for (double x = w; x < L && b.size() < 2000; x += w) b.push_back(x);
    return b;
}

void check(double t, HeisPoint p) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    if (!(p.r >= 0)) throw Error(ErrorCode::DomainError, "r must be nonnegative");
}

}  // namespace

double gaveau_kernel(double t, HeisPoint p, const QuadratureSpec& spec) {
    check(t, p);
    const double q = p.r * p.r / 4;
    auto f = [&](double lam) {
        LambdaTerms a = lambda_terms(t, lam);
        return std::cos(lam * p.z / 2) * a.k * std::exp(-q * a.lc);
    };
    double L = lambda_max(t, p.r);
    QuadratureSpec s = spec;
    s.abs_tol = spec.abs_tol / (t * t);
    auto res = integrate(f, 0.0, L, s, lambda_breaks(L, p.z));
    return res.value / (8 * kPi * kPi);
}

Jet2 gaveau_jet(double t, HeisPoint p, const QuadratureSpec& spec) {
    check(t, p);
    const double r = p.r, q = r * r / 4;
    auto f = [&](double lam) {
        LambdaTerms a = lambda_terms(t, lam);
        double g = a.k * std::exp(-q * a.lc);
        double c = std::cos(lam * p.z / 2), s = std::sin(lam * p.z / 2);
        double dr = -(r / 2) * a.lc;                         // d_r of the exponent
        double drr = (r * r / 4) * a.lc * a.lc - a.lc / 2;  // (d_r^2 e^E) / e^E
        VecN<6> out;
        out[0] = c * g;
        out[1] = dr * c * g;
        out[2] = -(lam / 2) * s * g;
        out[3] = drr * c * g;
        out[4] = -(lam / 2) * dr * s * g;
        out[5] = -(lam * lam / 4) * c * g;
        return out;
    };
    double L = lambda_max(t, r);
    QuadratureSpec s = spec;
    s.abs_tol = spec.abs_tol / (t * t);
    auto res = integrate(f, 0.0, L, s, lambda_breaks(L, p.z));
    const double n = 1 / (8 * kPi * kPi);
    Jet2 j;
    j.r = r;
    j.z = p.z;
    j.f = n * res.value[0];
    j.fr = n * res.value[1];
    j.fz = n * res.value[2];
    j.frr = n * res.value[3];
    j.frz = n * res.value[4];
    j.fzz = n * res.value[5];
    return j;
}

double heis_gamma(const Jet2& j) { return j.fr * j.fr + j.r * j.r * j.fz * j.fz; }

DilationProbe dilation_probe(double t, double r, double z) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    double rs = std::sqrt(t) * r, zs = t * z;
    if (!(rs >= 0 && rs < kPi / 2) || std::abs(zs) > kPi)
        throw Error(ErrorCode::DomainError, "scaled point leaves the chart");
    DilationProbe d;
    d.scaled = t * t * pt(t, rs, zs).value;
    d.limit = 2 * kPi * kPi * gaveau_kernel(1, {r, z});
    d.abs_error = std::abs(d.scaled - d.limit);
    d.rel_error = d.abs_error / d.limit;
    return d;
}

double dilation_limit_error(double t, double r, double z) { return dilation_probe(t, r, z).abs_error; }

namespace {

// 4 pi int_0^rmax int_0^zmax F(jet) r dz dr (even in z)
template <class F>
double heis_integral(const HeisDomain& d, const QuadratureSpec& spec, bool need_jet, double t, F&& field) {
    if (!(d.r_max > 0 && d.z_max > 0)) throw Error(ErrorCode::DomainError, "domain must be nonempty");
    const double cut = d.rel_cut * gaveau_kernel(t, {0, 0});
    QuadratureSpec inner = spec;
    auto outer = [&](double r) {
        auto g = [&](double z) {
            Jet2 j;
            if (need_jet) {
                j = gaveau_jet(t, {r, z});
            } else {
                j.r = r;
                j.z = z;
                j.f = gaveau_kernel(t, {r, z});
            }
            if (!(j.f > cut)) return 0.0;
            return field(j);
        };
        return r * integrate(g, 0.0, d.z_max, inner, {1.0, 4.0, 10.0}).value;
    };
    return 4 * kPi * integrate(outer, 0.0, d.r_max, spec, {1.0, 3.0}).value;
}

}  // namespace

double heis_mass(double t, const HeisDomain& d, const QuadratureSpec& spec) {
    return heis_integral(d, spec, false, t, [](const Jet2& j) { return j.f; });
}

double heis_fisher_constant(const HeisDomain& d, const QuadratureSpec& spec) {
    return 0.5 * heis_integral(d, spec, true, 1.0, [](const Jet2& j) { return heis_gamma(j) / j.f; });
}

double heis_moment(double q, const HeisDomain& d, const QuadratureSpec& spec) {
    if (!(q > 0)) throw Error(ErrorCode::DomainError, "q must be positive");
    return heis_integral(d, spec, true, 1.0, [q](const Jet2& j) {
        double g = heis_gamma(j) / (j.f * j.f);
        return std::pow(j.r, q) * j.f * std::pow(g, q / 2);
    });
}

}  // namespace su2hk
