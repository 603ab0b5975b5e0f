#include "su2hk/su2_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "su2hk/errors.hpp"
#include "su2hk/sphere_kernel.hpp"
#include "su2hk/sr_distance.hpp"

namespace su2hk {

using cd = std::complex<double>;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_t(double t) {
    if (!(t > 0) || !std::isfinite(t)) throw Error(ErrorCode::DomainError, "t must be positive and finite");
}

void check_r(double r) {
    if (!(r >= 0 && r <= kPi / 2)) throw Error(ErrorCode::DomainError, "r must lie in [0, pi/2]");
}

// w with cos w = cos r cos zeta. Half-angle forms of 1 -/+ x avoid the
// 1/sqrt(1 - x^2) amplification of arccos near x = +-1.
cd contour_angle(double r, cd zeta) {
    double sr2 = std::sin(r / 2);
    double c = std::cos(r);
    cd sz = std::sin(zeta / 2.0), cz = std::cos(zeta / 2.0);
    cd omx = 2 * sr2 * sr2 + 2 * c * sz * sz;  // 1 - x
    cd opx = 2 * sr2 * sr2 + 2 * c * cz * cz;  // 1 + x
    if (std::abs(omx) <= std::abs(opx)) return 2.0 * std::asin(std::sqrt(omx / 2.0));
    return kPi - 2.0 * std::asin(std::sqrt(opx / 2.0));
}

double lbinom(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

// geometric tail over k > K of mult * (2k+n+1)^pw * g * e^{-lambda t}; +inf if the majorant is not yet decreasing
double row_tail(double t, int n, int K, double pw, double gscale) {
    int k = K + 1;
    double m = 2.0 * k + n + 1;
    double lam = 4.0 * k * (k + n + 1) + 2.0 * n;
    double b = gscale * std::pow(m, pw) * std::exp(-lam * t);
    double rho = std::pow((m + 2) / m, pw) * std::exp(-(8.0 * k + 4 * n + 8) * t);
    if (rho >= 1) return std::numeric_limits<double>::infinity();
    return b / (1 - rho);
}

}  // namespace

const char* to_string(KernelRep r) {
    switch (r) {
        case KernelRep::Spectral: return "SPECTRAL";
        case KernelRep::Integral: return "INTEGRAL";
        case KernelRep::CutlocusClosed: return "CUTLOCUS_CLOSED";
    }
    return "?";
}

// ---------------------------------------------------------------- spectral

SpectralKernel::SpectralKernel(double t, double eps, bool jets) : t_(t), jets_(jets) {
    check_t(t);
    if (!(eps > 0)) throw Error(ErrorCode::DomainError, "eps must be positive");
    // term majorant (2k+n+1)^{1+P} e^{-lambda t}, with 4 (2k+n+1)^2 covering two derivatives
    const double pw = jets ? 3.0 : 1.0;
    const double gs = jets ? 4.0 : 1.0;

    // smallest N whose tail over |n| > N is below eps/2
    int N = 0;
    double ntail = 0;
    for (;; ++N) {
        if (N > kJacobiMaxN)
            throw Error(ErrorCode::TruncationCap, "n-series needs more than " + std::to_string(kJacobiMaxN) +
                                                      " terms at t=" + std::to_string(t));
        double n1 = N + 1;
        double m = n1 + 1;
        double rho0 = std::pow((m + 2) / m, pw) * std::exp(-(4 * n1 + 8) * t);
        double sig = std::pow((n1 + 2) / (n1 + 1), pw) * std::exp(-2 * t);
        if (rho0 >= 1 || sig >= 1) continue;
        double R = gs * std::pow(m, pw) * std::exp(-2 * n1 * t) / (1 - rho0);
        ntail = 2 * R / (1 - sig);
        if (ntail <= eps / 2) break;
    }
    plan_.eps = eps;
    plan_.n_max = N;
    plan_.k_per_n.assign(N + 1, 0);
    const double row_budget = eps / (2.0 * (N + 1));
    double bound = ntail;
    offset_.assign(N + 2, 0);
    for (int n = 0; n <= N; ++n) {
        double mult = n == 0 ? 1 : 2;
        int K = 0;
        double tail;
        for (;; ++K) {
            if (K > kJacobiMaxK)
                throw Error(ErrorCode::TruncationCap, "k-series needs more than " + std::to_string(kJacobiMaxK) +
                                                          " terms at t=" + std::to_string(t));
            tail = mult * row_tail(t, n, K, pw, gs);
            if (tail <= row_budget) break;
        }
        bound += tail;
        plan_.k_per_n[n] = K;
        plan_.k_max = std::max(plan_.k_max, K);
        offset_[n + 1] = offset_[n] + K + 1;
    }
    plan_.achieved_bound = bound;
    coef_.resize(offset_[N + 1]);
    for (int n = 0; n <= N; ++n)
        for (int k = 0; k <= plan_.k_per_n[n]; ++k) {
            double lam = 4.0 * k * (k + n + 1) + 2.0 * n;
            coef_[offset_[n] + k] = (2.0 * k + n + 1) * std::exp(-lam * t);
        }
}

SpectralKernel::Slice SpectralKernel::slice(double r, bool jets) const {
    check_r(r);
    if (jets && !jets_) throw Error(ErrorCode::DomainError, "kernel was planned without derivative bounds");
    Slice s;
    s.r = r;
    s.has_jets = jets;
    const int N = plan_.n_max;
    s.a.assign(N + 1, 0.0);
    if (jets) {
        s.ar.assign(N + 1, 0.0);
        s.arr.assign(N + 1, 0.0);
    }
    const double c = std::cos(r);
    const double lc = c > 0 ? std::log(c) : -std::numeric_limits<double>::infinity();
    const double x = std::cos(2 * r);
    const double tn = std::tan(r);
    const double sec2 = 1 + tn * tn;
    const double x1 = -2 * std::sin(2 * r), x2 = -4 * std::cos(2 * r);
    std::vector<double> p(plan_.k_max + 1), dp(plan_.k_max + 1), ddp(plan_.k_max + 1);
    double abs_sum = 0;
    for (int n = 0; n <= N; ++n) {
        const int K = plan_.k_per_n[n];
        double ls = n == 0 ? 0.0 : n * lc;
        // |c^n P_k| <= c^n binom(n+k, k); drop rows that cannot matter
        double guard = ls + lbinom(n + K, K);
        if (jets && n > 0) guard += 2 * std::log(n + 2.0 * K + 1) - 2 * lc;
        if (n > 0 && !(guard > -700)) continue;
        double shift = ls < -600 ? -600 - ls : 0;
        double sc = std::exp(ls + shift);
        jacobi_row(n, K, x, sc, p.data(), jets ? dp.data() : nullptr, jets ? ddp.data() : nullptr);
        const double* cf = &coef_[offset_[n]];
        double q = 0, qx = 0, qxx = 0, qa = 0;
        for (int k = 0; k <= K; ++k) {
            double v = cf[k] * p[k];
            q += v;
            qa += std::abs(v);
            if (jets) {
                qx += cf[k] * dp[k];
                qxx += cf[k] * ddp[k];
            }
        }
        double unshift = shift > 0 ? std::exp(-shift) : 1.0;
        q *= unshift;
        qa *= unshift;
        s.a[n] = q;
        abs_sum += (n == 0 ? 1 : 2) * qa;
        if (jets) {
            qx *= unshift;
            qxx *= unshift;
            double nt = n * tn;
            s.ar[n] = -nt * q + x1 * qx;
            s.arr[n] = (nt * nt - n * sec2) * q - 2 * nt * x1 * qx + x2 * qx + x1 * x1 * qxx;
        }
    }
    s.abs_sum = abs_sum;
    return s;
}

namespace {

// cos(nz), sin(nz) by rotation, reseeded every 32 steps
struct Rotor {
    double z, c1, s1, c = 1, s = 0;
    int n = 0;
    explicit Rotor(double zz) : z(zz), c1(std::cos(zz)), s1(std::sin(zz)) {}
    void next() {
        ++n;
        if (n % 32 == 0) {
            c = std::cos(n * z);
            s = std::sin(n * z);
        } else {
            double cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
    }
};

}  // namespace

KernelEval SpectralKernel::value(const Slice& sl, double z) const {
    z = reduce_angle(z);
    double v = sl.a[0];
    Rotor rot(z);
    for (std::size_t n = 1; n < sl.a.size(); ++n) {
        rot.next();
        v += 2 * sl.a[n] * rot.c;
    }
    double err = plan_.achieved_bound + 10 * kEps * sl.abs_sum;
    return {v, err, KernelRep::Spectral};
}

Jet2 SpectralKernel::jet(const Slice& sl, double z) const {
    if (!sl.has_jets) throw Error(ErrorCode::DomainError, "slice has no derivative data");
    z = reduce_angle(z);
    Jet2 j;
    j.r = sl.r;
    j.z = z;
    j.f = sl.a[0];
    j.fr = sl.ar[0];
    j.frr = sl.arr[0];
    Rotor rot(z);
    for (std::size_t n = 1; n < sl.a.size(); ++n) {
        rot.next();
        double dn = double(n);
        j.f += 2 * sl.a[n] * rot.c;
        j.fr += 2 * sl.ar[n] * rot.c;
        j.frr += 2 * sl.arr[n] * rot.c;
        j.fz -= 2 * dn * sl.a[n] * rot.s;
        j.fzz -= 2 * dn * dn * sl.a[n] * rot.c;
        j.frz -= 2 * dn * sl.ar[n] * rot.s;
    }
    return j;
}

std::shared_ptr<const SpectralKernel> spectral_kernel(double t, double eps, bool jets) {
    struct Entry {
        double t, eps;
        bool jets;
        std::shared_ptr<const SpectralKernel> k;
    };
    thread_local std::vector<Entry> cache;
    for (std::size_t i = 0; i < cache.size(); ++i)
        if (cache[i].t == t && cache[i].eps == eps && cache[i].jets == jets) {
            if (i > 0) std::rotate(cache.begin(), cache.begin() + i, cache.begin() + i + 1);
            return cache[0].k;
        }
    auto k = std::make_shared<const SpectralKernel>(t, eps, jets);
    cache.insert(cache.begin(), Entry{t, eps, jets, k});
    if (cache.size() > 8) cache.pop_back();
    return k;
}

KernelField::KernelField(double t, const KernelConfig& cfg, Accuracy acc) : t_(t), cfg_(cfg), acc_(acc) {
    check_t(t);
    if (t >= cfg_.t_min_spectral) sk_ = spectral_kernel(t, cfg_.eps, true);
}

bool KernelField::spectral_ok() const { return sk_ && (acc_ == Accuracy::Absolute || t_ >= cfg_.t_cross); }

const SpectralKernel::Slice& KernelField::slice(double r, bool jets) {
    if (!have_slice_ || slice_.r != r || (jets && !slice_.has_jets)) {
        slice_ = sk_->slice(r, jets);
        have_slice_ = true;
    }
    return slice_;
}

KernelEval KernelField::eval(double r, double z) {
    if (!spectral_ok() || (acc_ == Accuracy::Relative && r < cfg_.r_min)) return pt(t_, r, z, cfg_);
    return sk_->value(slice(r, false), z);
}

double KernelField::operator()(double r, double z) { return eval(r, z).value; }

Jet2 KernelField::jet(double r, double z) {
    if (!spectral_ok()) return pt_jet(t_, r, z, cfg_);
    return sk_->jet(slice(r, true), z);
}

KernelEval pt_spectral(double t, double r, double z, double eps, double t_min_spectral) {
    check_t(t);
    check_r(r);
    if (t < t_min_spectral)
        throw Error(ErrorCode::TruncationCap, "spectral series is not used below t=" + std::to_string(t_min_spectral));
    auto k = spectral_kernel(t, eps, false);
    return k->value(r, z);
}

Jet2 pt_spectral_jet(double t, double r, double z, double eps, double t_min_spectral) {
    check_t(t);
    if (!(r > 0 && r < kPi / 2)) throw Error(ErrorCode::DomainError, "jets need 0 < r < pi/2");
    if (t < t_min_spectral)
        throw Error(ErrorCode::TruncationCap, "spectral series is not used below t=" + std::to_string(t_min_spectral));
    auto k = spectral_kernel(t, eps, true);
    return k->jet(r, z);
}

// ---------------------------------------------------------------- integral

KernelEval pt_integral_diag(double t, double r, double z, const QuadratureSpec& spec, IntegralDiagnostics* diag,
                            double r_min) {
    check_t(t);
    if (!(r >= 0 && r <= kPi / 2)) throw Error(ErrorCode::DomainError, "r must lie in [0, pi/2]");
    if (t < 0.1 && r <= r_min)
        throw Error(ErrorCode::DomainError, "integral representation needs r > r_min for t < 0.1");
    spec.validate();
    z = reduce_angle(z);
    double th;
    if (z == 0)
        th = 0;
    else if (r == 0)
        th = std::copysign(kPi, z);
    else
        th = theta_star(r, z);
    const double a0 = std::abs(contour_angle(r, cd(th, 0)).real());
    const double dz = z - th;
    const double s0 = (dz * dz - a0 * a0) / (4 * t);
    const double lpref = std::log(qt_prefactor(t));
    // log of the integrand on Im y = -theta*, relative to e^{s0}
    auto L = [&](double v) {
        cd w = contour_angle(r, cd(th, v));
        return cd((dz * dz - v * v) / (4 * t), -v * dz / (2 * t)) + log_qt_angle(t, w) - lpref - s0;
    };
    auto f = [&](double v) {
        cd e1 = std::exp(L(v)), e2 = std::exp(L(-v));
        VecN<3> out;
        out[0] = (e1 + e2).real();
        out[1] = e1.imag() + e2.imag();
        out[2] = std::abs(e1) + std::abs(e2);
        return out;
    };
    // integration length from the decay of |integrand|
    const double peak = std::max(f(0.0)[2], 1e-300);
    double vmax = 0;
    int small = 0;
    const double v_cap = 400;
    double h = 0.25 * std::sqrt(t);
    for (double v = h; v <= v_cap; v *= 1.25) {
        if (f(v)[2] < 1e-18 * peak) {
            if (++small == 2) {
                vmax = v;
                break;
            }
        } else {
            small = 0;
        }
    }
    if (vmax == 0) throw Error(ErrorCode::SlowDecay, "integrand does not decay within the integration cap");
    // initial panels about four oscillations wide
    // phases: the Gaussian, e^{-w^2/4t}, and e^{-(2k+1) pi phi / t} inside q_t
    double freq = (std::abs(dz) + std::abs(z) + 2 * kPi) / (2 * t);
    double width = std::max(std::min(8 * kPi / freq, vmax / 4), 1e-3);
    std::vector<double> breaks;
    for (double b = width; b < vmax && breaks.size() < 4000; b += width) breaks.push_back(b);
    QuadratureSpec q = spec;
    q.max_refinements = std::max(spec.max_refinements, int(breaks.size()) * 4);
    auto res = integrate_adaptive(f, 0.0, vmax, q, breaks);
    if (!res.converged)
        throw Error(ErrorCode::QuadratureNotConverged,
                    "integral representation did not converge (error " + std::to_string(res.abs_err) + " of " +
                        std::to_string(res.value[2]) + ", " + std::to_string(res.evals) + " evaluations)");
    const double scale = qt_prefactor(t) * std::exp(s0) / std::sqrt(4 * kPi * t);
    double val = scale * res.value[0];
    double l1 = res.value[2];
    double err = scale * (res.abs_err + 32 * kEps * l1);
    if (!(val > 0) || !std::isfinite(val))
        throw Error(ErrorCode::QuadratureNotConverged, "integral representation lost all significance");
    double imag = scale * res.value[1];
    if (std::abs(imag) > 1e-10 * std::abs(val) + err)
        throw Error(ErrorCode::QuadratureNotConverged, "imaginary residual of the integral is too large");
    if (diag) {
        diag->theta_star = th;
        diag->v_max = vmax;
        diag->imag_residual = imag;
        diag->l1_norm = scale * l1 / val;
        diag->evals = res.evals;
    }
    return {val, err, KernelRep::Integral};
}

KernelEval pt_integral(double t, double r, double z, const QuadratureSpec& spec, double r_min) {
    return pt_integral_diag(t, r, z, spec, nullptr, r_min);
}

// ---------------------------------------------------------------- cut locus

KernelEval pt_cutlocus(double t, double z) {
    check_t(t);
    const double az = std::abs(reduce_angle(z));
    const double pi2 = kPi * kPi;
    double sum = 0, asum = 0;
    auto term = [&](int k) {
        double a = -kPi * (az + 2 * k * kPi) / (2 * t);  // ln E
        double br;
        if (a <= 0) {
            double e = std::exp(a);
            br = ((2 * k + 1) + 2 * k * e) / ((1 + e) * (1 + e));
        } else {
            double f = std::exp(-a);
            br = ((2 * k + 1) * f * f + 2 * k * f) / ((1 + f) * (1 + f));
        }
        return std::exp(-k * (k + 1.0) * pi2 / t) * br;
    };
    for (int k = 0;; ++k) {
        double v = term(k);
        sum += v;
        asum += std::abs(v);
        if (k > 0 && std::abs(v) < 1e-18 * asum) break;
        if (k > 400) break;
    }
    for (int k = -1;; --k) {
        double v = term(k);
        sum += v;
        asum += std::abs(v);
        if (k < -1 && std::abs(v) < 1e-18 * asum) break;
        if (k < -400) break;
    }
    double pref = pi2 * std::exp(t) / (4 * t * t) * std::exp(-(2 * kPi * az - az * az) / (4 * t));
    return {pref * sum, pref * 16 * kEps * asum, KernelRep::CutlocusClosed};
}

// ---------------------------------------------------------------- dispatch

namespace {

KernelEval pt_off_axis(double t, double r, double z, const KernelConfig& cfg) {
    if (t >= cfg.t_cross) return pt_spectral(t, r, z, cfg.eps, cfg.t_min_spectral);
    KernelEval ie;
    bool ok = true;
    try {
        ie = pt_integral(t, r, z, cfg.quad, cfg.r_min);
    } catch (const Error& e) {
        if (!e.is_convergence() || t < cfg.t_min_spectral) throw;
        ok = false;
    }
    if (ok && ie.abs_err <= 1e-8 * ie.value) return ie;
    if (t < cfg.t_min_spectral) return ie;
    KernelEval se = pt_spectral(t, r, z, cfg.eps, cfg.t_min_spectral);
    if (!ok || se.abs_err < ie.abs_err) return se;
    return ie;
}

}  // namespace

KernelEval pt(double t, double r, double z, const KernelConfig& cfg) {
    check_t(t);
    check_r(r);
    z = reduce_angle(z);
    if (r < cfg.r_min) {
        KernelEval e = pt_cutlocus(t, z);
        if (r > 0) {
            // O(r^2) offset from the axis, sized from the value at r_min
            const double rs = cfg.r_min * 1.0001;
            KernelEval m = pt_off_axis(t, rs, z, cfg);
            double q = r / rs;
            e.abs_err += std::abs(m.value - e.value) * q * q + m.abs_err;
        }
        return e;
    }
    return pt_off_axis(t, r, z, cfg);
}

Jet2 pt_jet(double t, double r, double z, const KernelConfig& cfg) {
    check_t(t);
    if (!(r > 0 && r < kPi / 2)) throw Error(ErrorCode::DomainError, "jets need 0 < r < pi/2");
    z = reduce_angle(z);
    const double h = 2e-3;
    bool fd_possible = r - 2 * h > cfg.r_min && r + 2 * h < kPi / 2;
    if (t >= cfg.t_min_spectral) {
        auto k = spectral_kernel(t, cfg.eps, true);
        auto sl = k->slice(r, true);
        KernelEval v = k->value(sl, z);
        if (v.abs_err <= 1e-8 * std::abs(v.value) || !fd_possible) return k->jet(sl, z);
    }
    if (!fd_possible) throw Error(ErrorCode::DomainError, "point too close to the chart boundary for derivatives");
    // 4th-order differences of ln p, which varies on an O(1) scale
    auto g = [&](double rr, double zz) { return std::log(pt(t, rr, zz, cfg).value); };
    const double w[4] = {1, -8, 8, -1};
    const int o[4] = {-2, -1, 1, 2};
    double g0 = g(r, z);
    double gr[4], gz[4];
    for (int i = 0; i < 4; ++i) {
        gr[i] = g(r + o[i] * h, z);
        gz[i] = g(r, z + o[i] * h);
    }
    double d_r = 0, d_z = 0;
    for (int i = 0; i < 4; ++i) {
        d_r += w[i] * gr[i];
        d_z += w[i] * gz[i];
    }
    d_r /= 12 * h;
    d_z /= 12 * h;
    double d_rr = (-gr[0] + 16 * gr[1] - 30 * g0 + 16 * gr[2] - gr[3]) / (12 * h * h);
    double d_zz = (-gz[0] + 16 * gz[1] - 30 * g0 + 16 * gz[2] - gz[3]) / (12 * h * h);
    double d_rz = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d_rz += w[i] * w[j] * g(r + o[i] * h, z + o[j] * h);
    d_rz /= 144 * h * h;
    Jet2 j;
    j.r = r;
    j.z = z;
    j.f = std::exp(g0);
    j.fr = j.f * d_r;
    j.fz = j.f * d_z;
    j.frr = j.f * (d_rr + d_r * d_r);
    j.fzz = j.f * (d_zz + d_z * d_z);
    j.frz = j.f * (d_rz + d_r * d_z);
    return j;
}

DiagonalForms pt_diagonal_forms(double t) {
    check_t(t);
    DiagonalForms d;
    d.theta = pt_cutlocus(t, 0).value;
    d.spectral = t >= 0.01 ? pt_spectral(t, 0, 0).value : std::numeric_limits<double>::quiet_NaN();
    d.value = t < 1 ? d.theta : d.spectral;
    return d;
}

double pt_diagonal(double t) { return pt_diagonal_forms(t).value; }

// ---------------------------------------------------------------- Green / Laplace

double green_function(double r, double z) {
    check_r(r);
    double c = std::cos(r);
    double den = 1 - 2 * c * std::cos(z) + c * c;
    if (!(den > 1e-300)) throw Error(ErrorCode::PoleAtOrigin, "Green function is singular at the identity");
    return 1 / (8 * kPi * std::sqrt(den));
}

TimeIntegral laplace_time_integral(double lambda, double r, double z, const QuadratureSpec& spec,
                                   const KernelConfig& cfg) {
    if (!(lambda >= 0)) throw Error(ErrorCode::DomainError, "lambda must be nonnegative");
    check_r(r);
    z = reduce_angle(z);
    if (r < cfg.r_min && std::abs(z) < 1e-12)
        throw Error(ErrorCode::PoleAtOrigin, "time integral diverges at the identity");
    double d2 = cc_distance(r, z, cfg.r_min).d_squared;
    double t_lo = std::max(0.005, (lambda + d2 / 4) / 45);
    double t_hi = 2 * std::sqrt(lambda) + 45;
    auto f = [&](double t) { return std::exp(-t - lambda / t) * pt(t, r, z, cfg).value; };
    QuadratureSpec q = spec;
    std::vector<double> br{cfg.t_cross, 1.0, 5.0};
    if (lambda > 0) br.push_back(std::sqrt(lambda));
    auto res = integrate(f, t_lo, t_hi, q, br);
    // neglected pieces: [0, t_lo] where the integrand increases, and [t_hi, inf) where p_t ~ 1
    double err = res.abs_err + t_lo * f(t_lo) + std::exp(-t_hi) * 2;
    TimeIntegral out;
    out.raw = res.value;
    out.normalized = res.value / kVolS3;
    out.abs_err = err / kVolS3;
    return out;
}

LaplaceCheck laplace_check(double lambda, double r, double z, const QuadratureSpec& spec) {
    if (!(lambda > 0)) throw Error(ErrorCode::DomainError, "lambda must be positive");
    check_r(r);
    z = reduce_angle(z);
    LaplaceCheck out;
    TimeIntegral ti = laplace_time_integral(lambda, r, z, spec);
    out.lhs_raw = ti.raw;
    out.lhs = ti.normalized;
    const double c = std::cos(r);
    // divide numerator and denominator by cosh y to keep everything bounded
    auto g = [&](double y) {
        double ay = std::abs(y);
        double s = std::sqrt(y * y + 4 * lambda);
        double ratio = std::exp(s - ay) * (1 + std::exp(-2 * s)) / (1 + std::exp(-2 * ay));
        double sech = 2 * std::exp(-ay) / (1 + std::exp(-2 * ay));
        cd den = ratio - c * std::cos(z) + cd(0, 1) * c * std::sin(z) * std::tanh(y);
        return sech / (8 * kPi * kPi * den);
    };
    auto res = integrate(g, -45.0, 45.0, spec, {0.0});
    out.rhs = res.value.real();
    out.rhs_imag = res.value.imag();
    out.rel_diff = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
    return out;
}

// ---------------------------------------------------------------- p*_t

std::complex<double> pt_star_shifted(double t, double r, double z, double eps) {
    check_t(t);
    check_r(r);
    if (t < 0.5) throw Error(ErrorCode::DomainError, "p*_t is evaluated for t >= 0.5");
    const double c = std::cos(r), x = std::cos(2 * r);
    // the k >= 1 weights are largest for n = -m: (2k+m+1) e^{-(lambda - 4m) t}
    auto wk = [&](int m, int k) {
        double lam = 4.0 * k * (k + m + 1) + 2.0 * m;
        return (2.0 * k + m + 1) * std::exp(-(lam - 4.0 * m) * t);
    };
    auto ktail = [&](int m, int K) {
        int k = K + 1;
        double rho = (2.0 * k + m + 3) / (2.0 * k + m + 1) * std::exp(-(8.0 * k + 4 * m + 8) * t);
        return wk(m, k) / (1 - rho);
    };
    int M = 0;
    for (;; ++M) {
        if (M > kJacobiMaxN) throw Error(ErrorCode::TruncationCap, "p*_t series needs too many terms");
        double m1 = M + 1;
        double rowb = 2 * ktail(M + 1, 0) + (m1 + 1) * std::exp(-6 * m1 * t);
        double sig = (m1 + 4) / (m1 + 3) * std::exp(-2 * t);
        if (sig < 1 && rowb / (1 - sig) <= eps / 2) break;
    }
    cd sum = 0;
    std::vector<double> p;
    for (int m = 0; m <= M; ++m) {
        double cm = m == 0 ? 1.0 : std::pow(c, m);
        if (m > 0) sum += (m + 1.0) * std::exp(-6.0 * m * t) * cm * std::polar(1.0, m * z);
        if (m > 0 && cm == 0) continue;
        int K = 1;
        while (K < kJacobiMaxK && (m == 0 ? 1 : 2) * ktail(m, K) > eps / (2.0 * (M + 1))) ++K;
        p.assign(K + 1, 0.0);
        jacobi_row(m, K, x, cm, p.data(), nullptr, nullptr);
        for (int k = 1; k <= K; ++k) {
            double lam = 4.0 * k * (k + m + 1) + 2.0 * m;
            double base = (2.0 * k + m + 1) * p[k];
            if (m == 0) {
                sum += base * std::exp(-lam * t);
            } else {
                sum += base * std::exp(-(lam + 4.0 * m) * t) * std::polar(1.0, m * z);
                sum += base * std::exp(-(lam - 4.0 * m) * t) * std::polar(1.0, -m * z);
            }
        }
    }
    return sum;
}

double phi_ratio(double t, const std::vector<double>& rs, const std::vector<double>& zs) {
    if (!(t >= 0.5)) throw Error(ErrorCode::DomainError, "phi_ratio is evaluated for t >= 0.5");
    if (rs.empty() || zs.empty()) throw Error(ErrorCode::DomainError, "empty grid");
    auto k = spectral_kernel(t, 1e-15, false);
    double best = 0;
    for (double r : rs) {
        auto sl = k->slice(r);
        for (double z : zs) {
            double p = k->value(sl, z).value;
            double a = std::abs(pt_star_shifted(t, r, z));
            best = std::max(best, a / p);
        }
    }
    return best;
}

}  // namespace su2hk
