#pragma once

#include <complex>

namespace su2hk {

enum class QtRep { Spectral, ThetaTrig, ThetaHyp };
const char* to_string(QtRep r);

struct QtEval {
    double value = 0;
    double abs_err = 0;
    QtRep representation = QtRep::Spectral;
};

// sqrt(pi) e^t / (4 t^{3/2})
double qt_prefactor(double t);

// sum_m (m+1) e^{-m(m+2)t} U_m(x) on [-1, 1]; tail bounded with |U_m| <= m+1
QtEval qt_spectral(double t, double x, double eps = 1e-14, int m_cap = 100000);
// Poisson-summed form at x = cos(theta), theta in [0, pi]
QtEval qt_theta_trig(double t, double theta);
// continuation to x = cosh(s) >= 1
QtEval qt_theta_hyp(double t, double s);
// dispatcher: spectral for t >= t_cross, else trig for x <= 1 and hyp for x > 1
QtEval qt(double t, double x, double eps = 1e-14, double t_cross = 0.35);

// ln q_t(cos w) for complex w. q_t(cos w) is even and 2 pi-periodic in w, so any
// branch of arccos may be passed in.
std::complex<double> log_qt_angle(double t, std::complex<double> w);
// ln q_t(x) for real x >= -1
double log_qt(double t, double x);

}  // namespace su2hk
