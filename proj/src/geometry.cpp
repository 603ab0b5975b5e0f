#include "su2hk/geometry.hpp"

#include <algorithm>

namespace su2hk {

using cd = std::complex<double>;

double reduce_angle(double z) {
    double k = std::nearbyint(z / (2 * kPi));
    double w = z - 2 * kPi * k;
    if (w > kPi) w = kPi;
    if (w < -kPi) w = -kPi;
    return w;
}

namespace pauli {
Mat2 X() {
    Mat2 m;
    m << 0, 1, -1, 0;
    return m;
}
Mat2 Y() {
    Mat2 m;
    m << 0, cd(0, 1), cd(0, 1), 0;
    return m;
}
Mat2 Z() {
    Mat2 m;
    m << cd(0, 1), 0, 0, cd(0, -1);
    return m;
}
}  // namespace pauli

double GroupElement::unitarity_defect() const {
    Mat2 d = m.adjoint() * m - Mat2::Identity();
    return d.cwiseAbs().maxCoeff();
}

void GroupElement::reproject() {
    cd a = 0.5 * (m(0, 0) + std::conj(m(1, 1)));
    cd b = 0.5 * (m(0, 1) - std::conj(m(1, 0)));
    double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    m << a, b, -std::conj(b), std::conj(a);
}

GroupElement to_matrix(const CylCoord& c) {
    GroupElement g;
    double cr = std::cos(c.r), sr = std::sin(c.r);
    cd a11 = cr * std::polar(1.0, c.z);
    cd a12 = sr * std::polar(1.0, c.theta - c.z);
    g.m << a11, a12, -std::conj(a12), std::conj(a11);
    return g;
}

CylCoord from_matrix(const GroupElement& g, bool* degenerate) {
    cd a11 = g.m(0, 0), a12 = g.m(0, 1);
    double m11 = std::abs(a11), m12 = std::abs(a12);
    CylCoord c;
    c.r = std::atan2(m12, m11);
    bool deg = false;
    if (m12 == 0) {
        c.theta = 0;
        c.z = std::arg(a11);
        deg = true;
    } else if (m11 == 0) {
        c.z = 0;
        c.r = kPi / 2;
        c.theta = std::arg(a12);
        deg = true;
    } else {
        c.z = std::arg(a11);
        c.theta = std::arg(a12) + c.z;
    }
    c.z = reduce_angle(c.z);
    c.theta = std::fmod(c.theta, 2 * kPi);
    if (c.theta < 0) c.theta += 2 * kPi;
    if (c.theta >= 2 * kPi) c.theta = 0;
    if (degenerate) *degenerate = deg;
    return c;
}

CylCoord from_matrix_checked(const GroupElement& g) {
    bool deg = false;
    CylCoord c = from_matrix(g, &deg);
    if (deg) throw Error(ErrorCode::DegenerateChart, "|a11| is 0 or 1; chart angle not identifiable");
    return c;
}

CylCoord left_translate(const GroupElement& g, const CylCoord& h) {
    return from_matrix(g * to_matrix(h));
}

double gamma(const Jet2& j) {
    if (j.r >= kPi / 2 && j.fz != 0)
        throw Error(ErrorCode::SingularAtBoundary, "tan r is infinite at r = pi/2");
    double t = std::tan(j.r);
    return j.fr * j.fr + t * t * j.fz * j.fz;
}

double gamma2(const Jet2& j) {
    if (!(j.r > 0 && j.r < kPi / 2))
        throw Error(ErrorCode::SingularAtBoundary, "gamma2 needs 0 < r < pi/2");
    double t = std::tan(j.r), c = std::cos(j.r);
    double a = j.frr;
    double b = t * t * j.fzz - 2 * j.fr / std::sin(2 * j.r);
    double e = j.fz / (c * c) + t * j.frz;
    return a * a + b * b + 2 * e * e;
}

double sublaplacian(const Jet2& j) {
    if (!(j.r > 0 && j.r < kPi / 2))
        throw Error(ErrorCode::SingularAtBoundary, "sub-Laplacian in the chart needs 0 < r < pi/2");
    double t = std::tan(j.r);
    return j.frr + 2 * j.fr / std::tan(2 * j.r) + t * t * j.fzz;
}

Jet2 log_jet(const Jet2& j) {
    if (!(j.f > 0)) throw Error(ErrorCode::DomainError, "log of a non-positive value");
    Jet2 l = j;
    double ir = j.fr / j.f, iz = j.fz / j.f;
    l.f = std::log(j.f);
    l.fr = ir;
    l.fz = iz;
    l.frr = j.frr / j.f - ir * ir;
    l.frz = j.frz / j.f - ir * iz;
    l.fzz = j.fzz / j.f - iz * iz;
    return l;
}

}  // namespace su2hk
