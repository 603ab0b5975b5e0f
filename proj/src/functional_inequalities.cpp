#include "su2hk/functional_inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "su2hk/errors.hpp"
#include "su2hk/sr_distance.hpp"

namespace su2hk {

void VerifyReport::add(double margin, double tt, double rr, double zz, double l, double rh) {
    if (n_points == 0 || margin < min_margin) {
        min_margin = margin;
        t = tt;
        r = rr;
        z = zz;
        lhs = l;
        rhs = rh;
    }
    ++n_points;
    if (margin < -tol) ++n_violations;
}

void VerifyReport::merge(const VerifyReport& o) {
    if (o.n_points == 0) return;
    if (n_points == 0 || o.min_margin < min_margin) {
        min_margin = o.min_margin;
        t = o.t;
        r = o.r;
        z = o.z;
        lhs = o.lhs;
        rhs = o.rhs;
    }
    n_points += o.n_points;
    n_violations += o.n_violations;
}

// ---------------------------------------------------------------- constants

namespace {

// sum over (n, k) of mult * (2k+n+1) lambda^power e^{-lambda T}; majorant m^{1+2 power} e^{-lambda T}
double diagonal_moment(double T, int power) {
    const double pw = 1 + 2 * power;
    const double rel = 1e-17;
    double total = 0;
    for (int n = 0;; ++n) {
        if (n > kJacobiMaxN) throw Error(ErrorCode::TruncationCap, "diagonal series needs too many terms");
        double mult = n == 0 ? 1 : 2;
        double row = 0;
        for (int k = 0;; ++k) {
            if (k > kJacobiMaxK) throw Error(ErrorCode::TruncationCap, "diagonal series needs too many terms");
            double lam = 4.0 * k * (k + n + 1) + 2.0 * n;
            double m = 2.0 * k + n + 1;
            row += m * std::pow(lam, power) * std::exp(-lam * T);
            double mk = m + 2, lk = lam + 8.0 * k + 4 * n + 8;
            double rho = std::pow((mk + 2) / mk, pw) * std::exp(-(8.0 * (k + 1) + 4 * n + 8) * T);
            if (rho < 1 && std::pow(mk, pw) * std::exp(-lk * T) / (1 - rho) <= rel * (total + mult * row)) break;
        }
        total += mult * row;
        double n1 = n + 1, m1 = n1 + 1;
        double rho0 = std::pow((m1 + 2) / m1, pw) * std::exp(-(4 * n1 + 8) * T);
        double sig = std::pow((n1 + 2) / (n1 + 1), pw) * std::exp(-2 * T);
        if (rho0 < 1 && sig < 1) {
            double tail = 2 * std::pow(m1, pw) * std::exp(-2 * n1 * T) / (1 - rho0) / (1 - sig);
            if (tail <= rel * total) break;
        }
    }
    return total;
}

}  // namespace

double a_const(double t) {
    if (!(t >= 0.01)) throw Error(ErrorCode::TruncationCap, "A(t) is evaluated for t >= 0.01");
    return 0.5 * diagonal_moment(2 * t, 1);
}

namespace {

// integral over the chart of F(jet of p_t), dropping points where p_t < rel_cut * p_t(0)
template <class F>
double kernel_jet_integral(double t, const QuadratureSpec& spec, F&& field, double rel_cut = 1e-12) {
    KernelConfig cfg;
    if (t < cfg.t_min_spectral) throw Error(ErrorCode::DomainError, "t below the spectral range");
    auto sk = spectral_kernel(t, cfg.eps, true);
    const double cut = rel_cut * pt_diagonal(t);
    SpectralKernel::Slice sl;
    bool have = false;
    auto g = [&](double r, double z) {
        if (!have || sl.r != r) {
            sl = sk->slice(r, true);
            have = true;
        }
        Jet2 j = sk->jet(sl, z);
        if (!(j.f > cut)) return 0.0;
        return field(j);
    };
    return haar_integrate_rz(g, spec, true).value;
}

}  // namespace

double c_const(double t, const QuadratureSpec& spec) {
    if (!(t >= 0.01)) throw Error(ErrorCode::DomainError, "C(t) is evaluated for t >= 0.01");
    return 0.5 * kernel_jet_integral(t, spec, [](const Jet2& j) { return gamma(j) / j.f; });
}

// ---------------------------------------------------------------- test functions

namespace testfn {

TestFunction constant(double c) {
    TestFunction f;
    f.name = "constant";
    f.f = [c](double, double, double) { return c; };
    f.eigen = true;
    f.mean = c;
    return f;
}

TestFunction f1() {
    TestFunction f;
    f.name = "f1";
    f.f = [](double r, double, double z) { return std::cos(r) * std::cos(z); };
    f.eigen = true;
    f.eigenvalue = 2;
    return f;
}

TestFunction f2() {
    TestFunction f;
    f.name = "f2";
    f.f = [](double r, double, double z) { return 2 + std::cos(r) * std::cos(z); };
    f.eigen = true;
    f.eigenvalue = 2;
    f.mean = 2;
    return f;
}

TestFunction f3(double s) {
    TestFunction f;
    f.name = "f3";
    // spectral slices, memoized per r for nested quadrature
    struct Cache {
        std::shared_ptr<const SpectralKernel> sk;
        SpectralKernel::Slice sl;
        bool have = false;
    };
    auto c = std::make_shared<Cache>();
    c->sk = spectral_kernel(s, 1e-14);
    f.f = [c](double r, double, double z) {
        if (!c->have || c->sl.r != r) {
            c->sl = c->sk->slice(r);
            c->have = true;
        }
        return c->sk->value(c->sl, z).value;
    };
    f.heat_shift = [s](double) { return s; };
    f.mean = 1;
    return f;
}

TestFunction f4() {
    TestFunction f;
    f.name = "f4";
    f.f = [](double r, double th, double z) { return std::sin(r) * std::cos(th - z); };
    f.eigen = true;
    f.eigenvalue = 2;
    f.theta_independent = false;
    return f;
}

TestFunction shifted_f1(double dz) {
    TestFunction f = f1();
    f.name = "f1_shifted";
    f.f = [dz](double r, double, double z) { return std::cos(r) * std::cos(z - dz); };
    return f;
}

TestFunction translated(const TestFunction& base, CylCoord g) {
    TestFunction f = base;
    f.name = base.name + "_translated";
    f.theta_independent = false;
    f.heat_shift = nullptr;
    GroupElement G = to_matrix(g);
    auto inner = base.f;
    f.f = [G, inner](double r, double th, double z) {
        CylCoord c = left_translate(G, {r, th, z});
        return inner(c.r, c.theta, c.z);
    };
    return f;
}

TestFunction sum(const TestFunction& a, const TestFunction& b, double wb) {
    TestFunction f;
    f.name = a.name + "+" + b.name;
    auto fa = a.f, fb = b.f;
    f.f = [fa, fb, wb](double r, double th, double z) { return fa(r, th, z) + wb * fb(r, th, z); };
    // constants carry eigenvalue 0
    f.eigen = a.eigen && b.eigen && (a.eigenvalue == b.eigenvalue || a.eigenvalue == 0 || b.eigenvalue == 0);
    f.eigenvalue = std::max(a.eigenvalue, b.eigenvalue);
    f.mean = a.mean + wb * b.mean;
    f.theta_independent = a.theta_independent && b.theta_independent;
    return f;
}

std::vector<TestFunction> builtins() {
    std::vector<TestFunction> v{constant(), f1(), f2(), f3(), f4(), shifted_f1()};
    v.push_back(translated(f3()));
    v.push_back(sum(translated(f3()), f4()));
    v.back().name = "f3_translated+f4";
    return v;
}

}  // namespace testfn

namespace {

// derivatives at the identity along exp(s X) and exp(s Y), 4th-order differences
std::pair<double, double> identity_gradient(const std::function<double(double, double, double)>& f, double h) {
    auto along = [&](const Mat2& M, double s) {
        GroupElement g{std::cos(s) * Mat2::Identity() + std::sin(s) * M};
        CylCoord c = from_matrix(g);
        return f(c.r, c.theta, c.z);
    };
    auto d = [&](const Mat2& M) {
        return (-along(M, 2 * h) + 8 * along(M, h) - 8 * along(M, -h) + along(M, -2 * h)) / (12 * h);
    };
    return {d(pauli::X()), d(pauli::Y())};
}

}  // namespace

double gamma_at_identity(const TestFunction& f, double h) {
    auto [x, y] = identity_gradient(f.f, h);
    return x * x + y * y;
}

IdentityAction identity_action(const TestFunction& f, double t, const QuadratureSpec& spec, int n_theta) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    KernelField field(t, KernelField::Accuracy::Absolute);
    auto g = [&](double r, double z) {
        Jet2 j = field.jet(r, z);
        double tr = std::tan(r);
        VecN<6> out(0.0);
        double v0 = f.theta_independent ? f.f(r, 0, z) : 0;
        for (int i = 0; i < n_theta; ++i) {
            double th = 2 * kPi * i / n_theta;
            double v = f.theta_independent ? v0 : f.f(r, th, z);
            double ct = std::cos(th), st = std::sin(th);
            double xp = ct * j.fr + st * tr * j.fz;  // right-invariant derivatives of p_t
            double yp = st * j.fr - ct * tr * j.fz;
            out[0] += j.f * v;
            out[1] += j.f * v * v;
            out[2] += xp * v;
            out[3] += yp * v;
            out[4] += v;
            out[5] += v * v;
        }
        return out * (1.0 / n_theta);
    };
    auto res = haar_integrate_rz(g, spec, false);
    IdentityAction a;
    a.pt_f = res.value[0];
    a.pt_f2 = res.value[1];
    a.gamma = res.value[2] * res.value[2] + res.value[3] * res.value[3];
    a.mean = res.value[4];
    a.mean_sq = res.value[5];
    return a;
}

namespace {

// P_t f(e), P_t f^2(e), Gamma(P_t f)(e), Var_mu(f) with exact pieces where available
struct Action {
    double ptf, ptf2, gam, var;
};

Action action_at_identity(const TestFunction& f, double t) {
    IdentityAction q = identity_action(f, t);
    Action a{q.pt_f, q.pt_f2, q.gamma, q.mean_sq - q.mean * q.mean};
    if (f.eigen) {
        double f0 = f.f(0, 0, 0);
        a.ptf = f.mean + std::exp(-f.eigenvalue * t) * (f0 - f.mean);
        a.gam = std::exp(-2 * f.eigenvalue * t) * gamma_at_identity(f);
    } else if (f.heat_shift) {
        a.ptf = pt_diagonal(t + f.heat_shift(t));
        if (f.theta_independent) a.gam = 0;
    }
    return a;
}

}  // namespace

VerifyReport first_gradient_bound_check(const TestFunction& f, double t, double tol) {
    VerifyReport rep;
    rep.name = "first_gradient_bound:" + f.name;
    rep.tol = tol;
    Action a = action_at_identity(f, t);
    double rhs = a_const(t) * a.var;
    rep.add(rhs - a.gam, t, 0, 0, a.gam, rhs);
    return rep;
}

VerifyReport reverse_poincare_check(const TestFunction& f, double t, double c_of_t, double tol) {
    VerifyReport rep;
    rep.name = "reverse_poincare:" + f.name;
    rep.tol = tol;
    Action a = action_at_identity(f, t);
    double rhs = c_of_t * (a.ptf2 - a.ptf * a.ptf);
    rep.add(rhs - a.gam, t, 0, 0, a.gam, rhs);
    return rep;
}

VerifyReport reverse_poincare_check(const TestFunction& f, double t, double tol) {
    return reverse_poincare_check(f, t, c_const(t), tol);
}

SharpnessProbe near_sharpness_probe(double t, int n_grid) {
    if (n_grid < 2) throw Error(ErrorCode::DomainError, "n_grid must be at least 2");
    using Fn = std::function<double(double, double, double)>;
    std::vector<Fn> basis{
        [](double, double, double) { return 1.0; },
        [](double r, double, double z) { return std::cos(r) * std::cos(z); },
        [](double r, double, double z) { return std::cos(r) * std::sin(z); },
        [](double r, double th, double z) { return std::sin(r) * std::cos(th - z); },
        [](double r, double th, double z) { return std::sin(r) * std::sin(th - z); },
    };
    const int nb = int(basis.size());
    // moment matrix under p_t
    KernelField field(t, KernelField::Accuracy::Absolute);
    const int nth = 32;
    auto g = [&](double r, double z) {
        double p = field(r, z);
        VecN<25> out(0.0);
        for (int i = 0; i < nth; ++i) {
            double th = 2 * kPi * i / nth;
            double v[5];
            for (int a = 0; a < nb; ++a) v[a] = basis[a](r, th, z);
            for (int a = 0; a < nb; ++a)
                for (int b = 0; b < nb; ++b) out[a * nb + b] += p * v[a] * v[b];
        }
        return out * (1.0 / nth);
    };
    auto M = haar_integrate_rz(g, {1e-12, 1e-10, 4000}, false).value;
    std::vector<std::pair<double, double>> grad(nb);
    for (int a = 0; a < nb; ++a) grad[a] = identity_gradient(basis[a], 1e-4);
    const double ct = c_const(t);
    const double decay = std::exp(-4 * t);  // P_t acts by e^{-2t} on every non-constant basis element
    SharpnessProbe best;
    std::vector<int> idx(nb, 0);
    std::vector<double> c(nb);
    long total = 1;
    for (int a = 0; a < nb; ++a) total *= n_grid;
    for (long code = 0; code < total; ++code) {
        long rem = code;
        for (int a = 0; a < nb; ++a) {
            c[a] = -1 + 2.0 * (rem % n_grid) / (n_grid - 1);
            rem /= n_grid;
        }
        double gx = 0, gy = 0, q = 0, m = 0;
        for (int a = 0; a < nb; ++a) {
            gx += c[a] * grad[a].first;
            gy += c[a] * grad[a].second;
            m += c[a] * M[a];  // first row: moments against 1
            for (int b = 0; b < nb; ++b) q += c[a] * c[b] * M[a * nb + b];
        }
        double var = q - m * m;
        if (!(var > 1e-12)) continue;
        double ratio = decay * (gx * gx + gy * gy) / (ct * var);
        if (ratio > best.max_ratio) {
            best.max_ratio = ratio;
            best.coefficients = c;
        }
    }
    return best;
}

// ---------------------------------------------------------------- Li-Yau

ChartGrid ChartGrid::interior(int nr, int nz) {
    if (nr < 1 || nz < 1) throw Error(ErrorCode::DomainError, "grid sizes must be positive");
    ChartGrid g;
    for (int i = 0; i < nr; ++i) g.r.push_back((i + 0.5) * (kPi / 2) / nr);
    for (int j = 0; j < nz; ++j) g.z.push_back(-kPi + (j + 0.5) * 2 * kPi / nz);
    return g;
}

KernelJets kernel_jets(double t, double s, const ChartGrid& g) {
    KernelJets kj;
    kj.t = t;
    kj.s = s;
    kj.grid = g;
    KernelField field(t + s);
    kj.jets.reserve(g.r.size() * g.z.size());
    for (double r : g.r)
        for (double z : g.z) kj.jets.push_back(field.jet(r, z));
    return kj;
}

double li_yau_constant_term(double t, double alpha) {
    if (!(alpha > 2)) throw Error(ErrorCode::DomainError, "alpha must exceed 2");
    return (3 * alpha - 1) * (3 * alpha - 1) / (alpha - 2) / t;
}

VerifyReport li_yau_check(const KernelJets& kj, double alpha, double tol) {
    if (!(alpha > 2)) throw Error(ErrorCode::DomainError, "alpha must exceed 2");
    const double t = kj.t;
    VerifyReport rep;
    rep.name = "li_yau";
    rep.tol = tol;
    const double b = (3 * alpha - 1) / (alpha - 1);
    for (const Jet2& j : kj.jets) {
        Jet2 lj = log_jet(j);
        double lp = sublaplacian(j) / j.f;
        double lhs = gamma(lj) + (t / alpha) * lj.fz * lj.fz;
        double rhs = (b - 2 * t / alpha) * lp + t / alpha - b + li_yau_constant_term(t, alpha);
        rep.add(rhs - lhs, t, j.r, j.z, lhs, rhs);
    }
    return rep;
}

VerifyReport li_yau_check(double t, double alpha, const ChartGrid& g, double s) {
    return li_yau_check(kernel_jets(t, s, g), alpha);
}

VerifyReport li_yau_exponential_check(const KernelJets& kj, double alpha, double tol) {
    if (!(alpha > 2)) throw Error(ErrorCode::DomainError, "alpha must exceed 2");
    const double t = kj.t;
    VerifyReport rep;
    rep.name = "li_yau_exponential";
    rep.tol = tol;
    const double e1 = std::exp(-8 * t / (3 * alpha));
    const double a = -1 + 1 / (3 * alpha);
    const double c0 = 6 * a * a * (alpha / (alpha - 2)) * e1 * e1 / (1 - e1);
    const double c1 = -3 * a * (alpha / (alpha - 1)) * e1;
    for (const Jet2& j : kj.jets) {
        Jet2 lj = log_jet(j);
        double lp = sublaplacian(j) / j.f;
        double lhs = gamma(lj) + 1.5 * (1 - e1) * lj.fz * lj.fz;
        double rhs = c0 + c1 * lp;
        rep.add(rhs - lhs, t, j.r, j.z, lhs, rhs);
    }
    return rep;
}

VerifyReport li_yau_exponential_check(double t, double alpha, const ChartGrid& g, double s) {
    return li_yau_exponential_check(kernel_jets(t, s, g), alpha);
}

// ---------------------------------------------------------------- Harnack

HarnackSample harnack_ratio(double t1, double t2, const CylCoord& p1, const CylCoord& p2) {
    if (!(t1 > 0 && t1 < t2 && t2 < 1)) throw Error(ErrorCode::DomainError, "need 0 < t1 < t2 < 1");
    HarnackSample s;
    double a = pt(t1, p1.r, p1.z).value;
    double b = pt(t2, p2.r, p2.z).value;
    s.ratio = a / b;
    s.log_ratio = std::log(a) - std::log(b);
    s.log_time_ratio = std::log(t2 / t1);
    GroupElement g = to_matrix(p1).inverse() * to_matrix(p2);
    CylCoord c = from_matrix(g);
    s.delta2_over_dt = cc_distance(c.r, c.z).d_squared / (t2 - t1);
    return s;
}

HarnackFit harnack_fit(const std::vector<HarnackSample>& s) {
    // constraints a_i A1 + b_i A2 >= y_i, plus A1 >= 0, A2 >= 0
    struct Row {
        double a, b, y;
    };
    std::vector<Row> rows;
    for (const auto& x : s) rows.push_back({x.log_time_ratio, x.delta2_over_dt, x.log_ratio});
    rows.push_back({1, 0, 0});
    rows.push_back({0, 1, 0});
    auto feasible = [&](double A1, double A2) {
        for (const auto& w : rows)
            if (w.a * A1 + w.b * A2 < w.y - 1e-12 * (1 + std::abs(w.y))) return false;
        return true;
    };
    HarnackFit best;
    double obj = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double det = rows[i].a * rows[j].b - rows[i].b * rows[j].a;
            if (std::abs(det) < 1e-14) continue;
            double A1 = (rows[i].y * rows[j].b - rows[i].b * rows[j].y) / det;
            double A2 = (rows[i].a * rows[j].y - rows[i].y * rows[j].a) / det;
            if (!feasible(A1, A2)) continue;
            if (A1 + A2 < obj) {
                obj = A1 + A2;
                best = {A1, A2, true};
            }
        }
    return best;
}

// ---------------------------------------------------------------- gradient bounds

double grad_log_kernel_ratio(double t, double r, double z) {
    if (!(t > 0 && t < 1)) throw Error(ErrorCode::DomainError, "need 0 < t < 1");
    Jet2 j = pt_jet(t, r, z);
    double g = gamma(j) / (j.f * j.f);
    double d = std::sqrt(cc_distance(r, z).d_squared);
    return std::sqrt(g) / (d / t + 1 / std::sqrt(t));
}

LpProbe lp_bound_probe(double p, double t, const QuadratureSpec& spec) {
    if (!(p > 1)) throw Error(ErrorCode::DomainError, "p must exceed 1");
    if (!(t >= 0)) throw Error(ErrorCode::DomainError, "t must be nonnegative");
    LpProbe out;
    auto m = integrate([p](double r) { return std::pow(std::sin(r), p) * std::sin(2 * r); }, 0.0, kPi / 2, spec);
    out.moment = m.value;
    out.limit_ratio = std::pow(out.moment, -1 / p);
    out.lhs = std::exp(-2 * t);  // e^{-2t} sin r at r = pi/2
    double ptsin;
    if (t == 0) {
        ptsin = 1;
    } else {
        // P_t phi(g*) = int p_t(h) phi(g* h) dmu(h), g* = (pi/2, 0, 0)
        GroupElement gs = to_matrix({kPi / 2, 0, 0});
        KernelField field(t, KernelField::Accuracy::Absolute);
        const int nth = 32;
        auto g = [&](double r, double z) {
            double pk = field(r, z);
            double acc = 0;
            for (int i = 0; i < nth; ++i) {
                GroupElement h = gs * to_matrix({r, 2 * kPi * i / nth, z});
                acc += std::pow(std::abs(h.m(0, 1)), p);
            }
            return pk * acc / nth;
        };
        ptsin = haar_integrate_rz(g, spec, false).value;
    }
    out.rhs_over_cp = std::exp(-2 * t) * std::pow(ptsin, 1 / p);
    out.ratio = out.lhs / out.rhs_over_cp;
    return out;
}

double lemma_limit_moment(double q, double t, const QuadratureSpec& spec) {
    if (!(q > 1)) throw Error(ErrorCode::DomainError, "q must exceed 1");
    if (!(t >= 0.02 && t <= 1)) throw Error(ErrorCode::DomainError, "t must lie in [0.02, 1]");
    return kernel_jet_integral(t, spec, [q](const Jet2& j) {
        double g = gamma(j) / (j.f * j.f);
        return std::pow(std::sin(2 * j.r), q) * std::pow(g, q / 2) * j.f;
    });
}

}  // namespace su2hk
