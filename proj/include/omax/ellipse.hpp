#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "omax/support.hpp"

namespace omax {

/// Planar elliptical disk: center + semi-axes p >= q >= 0 with the major axis
/// rotated by phi in [0, pi). q = 0 degenerates to a segment, p = q = 0 to a
/// point.
struct EllipseDisk {
    cplx center{0, 0};
    double p = 0; // semi-major
    double q = 0; // semi-minor
    double phi = 0;

    bool is_point() const { return p <= 0; }
    bool is_segment() const { return q <= 0 && p > 0; }
};

inline EllipseDisk canonical_ellipse(cplx center, double p, double q, double phi) {
    if (p < q) {
        std::swap(p, q);
        phi += M_PI_2;
    }
    p = std::max(p, 0.0);
    q = std::max(q, 0.0);
    // Snap near-degenerate axes so downstream tangency logic can branch.
    const double snap = 1e-10 * std::max(p, 1.0);
    if (q < snap) q = 0;
    if (p < snap) {
        p = 0;
        q = 0;
    }
    phi = std::fmod(phi, M_PI);
    if (phi < 0) phi += M_PI;
    if (p == q) phi = 0; // circle or point: rotation is meaningless
    EllipseDisk e;
    e.center = center;
    e.p = p;
    e.q = q;
    e.phi = phi;
    return e;
}

/// Support function of the disk in direction angle theta.
inline double ellipse_support(const EllipseDisk& e, double theta) {
    const double psi = theta - e.phi;
    const double c = std::cos(psi), s = std::sin(psi);
    return e.center.real() * std::cos(theta) + e.center.imag() * std::sin(theta) +
           std::sqrt(e.p * e.p * c * c + e.q * e.q * s * s);
}

/// Boundary point of the disk where the outward normal is theta. For a
/// segment (q = 0) this jumps between the two endpoints.
inline cplx ellipse_contact(const EllipseDisk& e, double theta) {
    if (e.is_point()) return e.center;
    const double psi = theta - e.phi;
    const double t = std::atan2(e.q * std::sin(psi), e.p * std::cos(psi));
    const cplx local(e.p * std::cos(t), e.q * std::sin(t));
    return e.center + std::polar(1.0, e.phi) * local;
}

/// Boundary point at eccentric parameter t.
inline cplx ellipse_point(const EllipseDisk& e, double t) {
    const cplx local(e.p * std::cos(t), e.q * std::sin(t));
    return e.center + std::polar(1.0, e.phi) * local;
}

struct EllipseExtractionInfo {
    bool sweep_fallback = false;
    double validation_error = 0;
};

namespace detail {

/// Recover the ellipse from a support-function sweep of the 2x2 matrix.
/// Center from the odd part of h; p, q, phi from the DFT of the squared even
/// part, which equals (p^2+q^2)/2 + (p^2-q^2)/2 * cos 2(theta - phi).
inline EllipseDisk ellipse_from_sweep(const CMatrix& a, int samples, const ToleranceConfig& cfg) {
    const OperatorTuple t = cartesian_pair(a);
    std::vector<double> h(samples);
    for (int k = 0; k < samples; ++k) {
        const double th = 2.0 * M_PI * k / samples;
        h[k] = support(t, {std::cos(th), std::sin(th)}, cfg).value;
    }
    double cx = 0, cy = 0, mean = 0, re2 = 0, im2 = 0;
    for (int k = 0; k < samples; ++k) {
        const double th = 2.0 * M_PI * k / samples;
        const int kop = (k + samples / 2) % samples;
        const double odd = 0.5 * (h[k] - h[kop]);
        const double g = 0.5 * (h[k] + h[kop]); // radial part sqrt(p^2 cos^2 + q^2 sin^2)
        cx += odd * std::cos(th);
        cy += odd * std::sin(th);
        mean += g * g;
        re2 += g * g * std::cos(2 * th);
        im2 += g * g * std::sin(2 * th);
    }
    cx *= 2.0 / samples;
    cy *= 2.0 / samples;
    mean /= samples;
    re2 *= 2.0 / samples;
    im2 *= 2.0 / samples;
    const double amp = std::hypot(re2, im2);
    const double p2 = mean + amp, q2 = std::max(mean - amp, 0.0);
    const double phi = 0.5 * std::atan2(im2, re2);
    return canonical_ellipse(cplx(cx, cy), std::sqrt(std::max(p2, 0.0)), std::sqrt(q2), phi);
}

} // namespace detail

/// Elliptical numerical range of a 2x2 matrix. Closed form: foci are the
/// eigenvalues; the minor axis is half the off-diagonal entry of the Schur
/// form, equivalent to tr(A*A) - |l1|^2 - |l2|^2 but free of the cancellation
/// that formula suffers near normal matrices. The result is validated against
/// a boundary sweep and the sweep wins on disagreement.
inline EllipseDisk ellipse_of_2x2(const CMatrix& a, const ToleranceConfig& cfg = {},
                                  EllipseExtractionInfo* info = nullptr) {
    if (a.rows() != 2 || a.cols() != 2) throw invalid_input("ellipse_of_2x2: matrix must be 2x2");
    const cplx tr = a.trace();
    const cplx det = a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    const cplx disc = std::sqrt(tr * tr * 0.25 - det);
    const cplx l1 = tr * 0.5 + disc, l2 = tr * 0.5 - disc;

    // Unit eigenvector for l1, taking the better-conditioned of the two
    // candidate forms; both vanish only for scalar matrices.
    cplx v1x = a.at(0, 1), v1y = l1 - a.at(0, 0);
    {
        const cplx wx = l1 - a.at(1, 1), wy = a.at(1, 0);
        if (std::norm(wx) + std::norm(wy) > std::norm(v1x) + std::norm(v1y)) {
            v1x = wx;
            v1y = wy;
        }
    }
    double q = 0;
    const double vn = std::sqrt(std::norm(v1x) + std::norm(v1y));
    if (vn > 1e-14 * a.max_norm()) {
        v1x /= vn;
        v1y /= vn;
        // Schur off-diagonal w = <A v2, v1> with v2 the orthogonal mate.
        const cplx v2x = -std::conj(v1y), v2y = std::conj(v1x);
        const cplx av2x = a.at(0, 0) * v2x + a.at(0, 1) * v2y;
        const cplx av2y = a.at(1, 0) * v2x + a.at(1, 1) * v2y;
        q = 0.5 * std::abs(std::conj(v1x) * av2x + std::conj(v1y) * av2y);
    }
    const double focal = 0.5 * std::abs(l1 - l2);
    const double p = std::sqrt(q * q + focal * focal);
    const double phi = (focal > 0) ? std::arg(l1 - l2) : 0.0;
    EllipseDisk e = canonical_ellipse(tr * 0.5, p, q, phi);

    // Validate against the sweep contract at a modest resolution.
    double err = 0;
    const int probes = 180;
    const OperatorTuple t = cartesian_pair(a);
    for (int k = 0; k < probes; ++k) {
        const double th = 2.0 * M_PI * k / probes;
        const double hs = support(t, {std::cos(th), std::sin(th)}, cfg).value;
        err = std::max(err, std::abs(hs - ellipse_support(e, th)));
    }
    if (info) {
        info->validation_error = err;
        info->sweep_fallback = false;
    }
    if (err > 1e-7 * std::max(1.0, e.p + std::abs(e.center))) {
        e = detail::ellipse_from_sweep(a, 720, cfg);
        if (info) info->sweep_fallback = true;
    }
    return e;
}

/// A 2x2 matrix whose numerical range is the given disk:
/// center I + e^{i phi} [[0, p+q], [p-q, 0]].
inline CMatrix matrix_of_ellipse(const EllipseDisk& e) {
    CMatrix m(2, 2);
    const cplx rot = std::polar(1.0, e.phi);
    m.at(0, 0) = e.center;
    m.at(1, 1) = e.center;
    m.at(0, 1) = rot * cplx(e.p + e.q, 0);
    m.at(1, 0) = rot * cplx(e.p - e.q, 0);
    return m;
}

/// Scale the disk about its center; used to pull certificates strictly inside.
inline EllipseDisk shrink_ellipse(const EllipseDisk& e, double factor) {
    return canonical_ellipse(e.center, e.p * factor, e.q * factor, e.phi);
}

inline bool ellipse_close(const EllipseDisk& x, const EllipseDisk& y, double tol) {
    if (std::abs(x.center - y.center) > tol) return false;
    if (std::abs(x.p - y.p) > tol || std::abs(x.q - y.q) > tol) return false;
    if (x.p - x.q <= tol) return true; // circle/point: rotation immaterial
    double d = std::fmod(std::abs(x.phi - y.phi), M_PI);
    d = std::min(d, M_PI - d);
    return d <= tol;
}

} // namespace omax
