#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

#include "su2hk/errors.hpp"

namespace su2hk {

struct QuadratureSpec {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_refinements = 4000;

    void validate() const {
        if (!(abs_tol > 0) || !(rel_tol > 0) || max_refinements < 0)
            throw Error(ErrorCode::DomainError, "quadrature tolerances must be positive");
    }
};

// Small fixed-size vector so several integrals can share one adaptive pass.
template <std::size_t K>
struct VecN {
    std::array<double, K> v{};
    VecN() = default;
    VecN(double s) { v.fill(s); }  // NOLINT: boost's rule initializes results from 0
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    VecN& operator+=(const VecN& o) {
        for (std::size_t i = 0; i < K; ++i) v[i] += o.v[i];
        return *this;
    }
    friend VecN operator+(VecN a, const VecN& b) { return a += b; }
    friend VecN operator-(VecN a, const VecN& b) {
        for (std::size_t i = 0; i < K; ++i) a.v[i] -= b.v[i];
        return a;
    }
    friend VecN operator-(VecN a) { return a * -1.0; }
    friend VecN operator*(VecN a, double s) {
        for (auto& x : a.v) x *= s;
        return a;
    }
    friend VecN operator*(double s, VecN a) { return a * s; }
    friend double abs(const VecN& a) {
        double m = 0;
        for (double x : a.v) m = std::max(m, std::abs(x));
        return m;
    }
};

namespace detail {
inline double qnorm(double x) { return std::abs(x); }
inline double qnorm(const std::complex<double>& x) { return std::abs(x); }
template <std::size_t K>
double qnorm(const VecN<K>& x) {
    return abs(x);
}
}  // namespace detail

template <class T>
struct QuadResult {
    T value{};
    double abs_err = 0;
    int evals = 0;
    bool converged = true;
};

// Global adaptive bisection on G7K15 panels. `breaks` are interior points
// where the integrand is known to be non-smooth.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec,
                        const std::vector<double>& breaks = {}) -> QuadResult<decltype(f(a))> {
    using T = decltype(f(a));
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Panel {
        double a, b;
        T val;
        double err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    QuadResult<T> res;
    if (a == b) return res;
    auto eval = [&](double lo, double hi) {
        double err = 0;
        T v = GK::integrate(f, lo, hi, 0, 0.0, &err);
        err *= 0.5 * std::abs(hi - lo);  // boost reports the error on [-1, 1] at depth 0
        res.evals += 15;
        return Panel{lo, hi, v, err};
    };
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > std::min(a, b) && x < std::max(a, b)) pts.push_back(x);
    pts.push_back(b);
    if (a < b)
        std::sort(pts.begin(), pts.end());
    else
        std::sort(pts.begin(), pts.end(), std::greater<>());

    std::priority_queue<Panel> heap;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) heap.push(eval(pts[i], pts[i + 1]));

    auto totals = [&](T& tot, double& err) {
        auto copy = heap;
        tot = T(0.0);
        err = 0;
        while (!copy.empty()) {
            tot += copy.top().val;
            err += copy.top().err;
            copy.pop();
        }
    };
    T tot;
    double err;
    totals(tot, err);
    int refinements = 0;
    while (err > std::max(spec.abs_tol, spec.rel_tol * detail::qnorm(tot))) {
        if (refinements >= spec.max_refinements) {
            res.converged = false;
            break;
        }
        Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {  // interval exhausted
            res.converged = false;
            heap.push(worst);
            break;
        }
        Panel l = eval(worst.a, mid), r = eval(mid, worst.b);
        tot = tot - worst.val + l.val + r.val;
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        ++refinements;
        if (refinements % 256 == 0) totals(tot, err);
    }
    totals(tot, err);
    res.value = tot;
    res.abs_err = err;
    return res;
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec,
               const std::vector<double>& breaks = {}) -> QuadResult<decltype(f(a))> {
    auto r = integrate_adaptive(std::forward<F>(f), a, b, spec, breaks);
    if (!r.converged)
        throw Error(ErrorCode::QuadratureNotConverged,
                    "adaptive rule exhausted on [" + std::to_string(a) + ", " + std::to_string(b) +
                        "], error estimate " + std::to_string(r.abs_err));
    return r;
}

}  // namespace su2hk
