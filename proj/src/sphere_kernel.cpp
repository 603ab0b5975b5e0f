#include "su2hk/sphere_kernel.hpp"

#include <cmath>
#include <limits>

#include "su2hk/errors.hpp"
#include "su2hk/geometry.hpp"

namespace su2hk {

using cd = std::complex<double>;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

cd expm1c(cd w) {
    if (std::abs(w) < 0.2) {
        cd s = 0, term = w;
        for (int n = 2; n < 40; ++n) {
            s += term;
            term *= w / double(n);
            if (std::abs(term) < 1e-18 * std::abs(s)) break;
        }
        return s + term;
    }
    return std::exp(w) - 1.0;
}

// B(w) in q_t(cos w) = pref * exp(-w^2/4t) * B(w), with 0 <= Re w <= pi
cd scaled_bracket(double t, cd w) {
    const double pi2 = kPi * kPi;
    if (w.real() <= kPi / 2) {
        // pair k with -k around w = 0
        cd s = 1.0;
        for (int k = 1;; ++k) {
            double e0 = -k * k * pi2 / t;
            double kp = k * kPi / t;
            if (e0 + kp * std::abs(w.real()) < -60) break;
            cd x = kp * w;
            if (std::abs(x) < 1) {
                cd sh = std::abs(w) > 0 ? std::sinh(x) / w : cd(kp);
                s += 2.0 * std::exp(e0) * (std::cosh(x) - 2.0 * k * kPi * sh);
            } else {
                cd c = 2.0 * k * kPi / w;
                s += std::exp(e0 + x) * (1.0 - c) + std::exp(e0 - x) * (1.0 + c);
            }
        }
        cd ratio = std::abs(w) > 1e-8 ? w / std::sin(w) : cd(1.0) + w * w / 6.0;
        return ratio * s;
    }
    // pair k with -k-1 around w = pi, phi = pi - w
    cd phi = kPi - w;
    cd s = 0;
    for (int k = 0;; ++k) {
        double m = (2 * k + 1) * kPi;
        cd pre = k == 0 ? cd(1.0) : std::exp(-(k * kPi * w + double(k) * k * pi2) / t);
        if (k > 0 && std::abs(pre) < 1e-30) break;
        cd g;
        if (std::abs(phi) > 1e-3) {
            g = ((m - phi) - (m + phi) * std::exp(-m * phi / t)) / std::sin(phi);
        } else if (std::abs(phi) > 0) {
            g = (-(m + phi) * expm1c(-m * phi / t) / phi - 2.0) * (phi / std::sin(phi));
        } else {
            g = m * m / t - 2.0;
        }
        s += pre * g;
        if (k > 40) break;
    }
    return s;
}

// map w to an equivalent angle with Re w in [0, pi]
cd fold_angle(cd w) {
    double re = std::remainder(w.real(), 2 * kPi);  // (-pi, pi]
    cd v(re, w.imag());
    if (v.real() < 0) v = -v;
    return v;
}

}  // namespace

const char* to_string(QtRep r) {
    switch (r) {
        case QtRep::Spectral: return "spectral";
        case QtRep::ThetaTrig: return "theta_trig";
        case QtRep::ThetaHyp: return "theta_hyp";
    }
    return "?";
}

double qt_prefactor(double t) { return std::sqrt(kPi) * std::exp(t) / (4 * t * std::sqrt(t)); }

QtEval qt_spectral(double t, double x, double eps, int m_cap) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    if (!(x >= -1 - 1e-12 && x <= 1 + 1e-12)) throw Error(ErrorCode::DomainError, "qt_spectral needs x in [-1, 1]");
    double u0 = 1, u1 = 2 * x;
    double sum = 1, asum = 1;
    for (int m = 1;; ++m) {
        double um = (m == 1) ? u1 : 0;
        if (m > 1) {
            double u2 = 2 * x * u1 - u0;
            u0 = u1;
            u1 = u2;
            um = u1;
        }
        double term = (m + 1) * std::exp(-m * (m + 2.0) * t) * um;
        sum += term;
        asum += std::abs(term);
        // tail majorant over m' > m
        double mp = m + 1;
        double b = (mp + 1) * (mp + 1) * std::exp(-mp * (mp + 2) * t);
        double rho = ((mp + 2) / (mp + 1)) * ((mp + 2) / (mp + 1)) * std::exp(-(2 * mp + 3) * t);
        if (rho < 1) {
            double tail = b / (1 - rho);
            if (tail <= eps) return {sum, tail + 4 * kEps * asum, QtRep::Spectral};
        }
        if (m >= m_cap) throw Error(ErrorCode::TruncationCap, "qt_spectral: t too small for the spectral series");
    }
}

QtEval qt_theta_trig(double t, double theta) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    if (!(theta >= 0 && theta <= kPi)) throw Error(ErrorCode::DomainError, "theta must lie in [0, pi]");
    cd b = scaled_bracket(t, cd(theta, 0));
    double v = qt_prefactor(t) * std::exp(-theta * theta / (4 * t)) * b.real();
    return {v, 16 * kEps * std::abs(v), QtRep::ThetaTrig};
}

QtEval qt_theta_hyp(double t, double s) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    if (!(s >= 0)) throw Error(ErrorCode::DomainError, "s must be nonnegative");
    if (s * s / (4 * t) > 700) throw Error(ErrorCode::OverflowGuard, "e^{s^2/4t} overflows; use log_qt");
    double br = 1;
    for (int k = 1;; ++k) {
        double e = std::exp(-k * k * kPi * kPi / t);
        double sk = s > 0 ? std::sin(k * kPi * s / t) / s : k * kPi / t;
        double term = 2 * e * (std::cos(k * kPi * s / t) - 2 * k * kPi * sk);
        br += term;
        if (e * (1 + 2 * k * kPi * (k * kPi / t + 1)) < 1e-18) break;
    }
    double ratio = s > 1e-8 ? s / std::sinh(s) : 1 - s * s / 6;
    double v = qt_prefactor(t) * ratio * std::exp(s * s / (4 * t)) * br;
    return {v, 16 * kEps * std::abs(v), QtRep::ThetaHyp};
}

QtEval qt(double t, double x, double eps, double t_cross) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    if (!(x >= -1 + 1e-9)) throw Error(ErrorCode::DomainError, "qt needs x >= -1 + 1e-9");
    if (t >= t_cross && x <= 1) return qt_spectral(t, x, eps);
    if (x <= 1) return qt_theta_trig(t, std::acos(x));
    return qt_theta_hyp(t, std::acosh(x));
}

cd log_qt_angle(double t, cd w) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t must be positive");
    cd v = fold_angle(w);
    return std::log(qt_prefactor(t)) - v * v / (4 * t) + std::log(scaled_bracket(t, v));
}

double log_qt(double t, double x) {
    if (!(x >= -1)) throw Error(ErrorCode::DomainError, "log_qt needs x >= -1");
    cd w = x <= 1 ? cd(std::acos(x), 0) : cd(0, std::acosh(x));
    return log_qt_angle(t, w).real();
}

}  // namespace su2hk
