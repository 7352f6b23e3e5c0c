#pragma once

#include <cmath>
#include <vector>

#include "omax/support.hpp"

namespace omax {

/// Planar boundary sweep of W(A): one support sample per direction angle.
struct NRBoundary {
    std::vector<double> thetas; // strictly increasing in [0, 2pi)
    std::vector<SupportSample> samples;
    bool closed = true;
};

/// Boundary of W(A) for a single square matrix via its Cartesian pair,
/// sampled at `samples` equally spaced normal directions.
inline NRBoundary boundary2d(const CMatrix& a, int samples, const ToleranceConfig& cfg = {}) {
    if (!a.is_square()) throw invalid_input("boundary2d: matrix must be square");
    if (samples < 3) throw invalid_input("boundary2d: need at least 3 samples");
    const OperatorTuple t = cartesian_pair(a);
    NRBoundary b;
    b.thetas.reserve(samples);
    b.samples.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double th = 2.0 * M_PI * k / samples;
        b.thetas.push_back(th);
        b.samples.push_back(support(t, {std::cos(th), std::sin(th)}, cfg));
    }
    return b;
}

/// A maximal line segment on the boundary of W(A), reported with the angle of
/// its outward normal.
struct FlatPortion {
    double theta = 0;
    cplx a{0, 0}; // endpoint reached first in ccw traversal
    cplx b{0, 0};
};

namespace detail {

inline cplx support_contact(const OperatorTuple& t, double theta, const ToleranceConfig& cfg) {
    const SupportSample s = support(t, {std::cos(theta), std::sin(theta)}, cfg);
    return cplx(s.point[0], s.point[1]);
}

/// Top eigenvalue cluster of cos(th) Re A + sin(th) Im A, at degeneracy_tol
/// scaled by the spectral radius.
inline int top_multiplicity(const OperatorTuple& t, double theta, const ToleranceConfig& cfg) {
    const EigDecomposition eig = herm_eig(
        hermitian_part(direction_matrix(t, {std::cos(theta), std::sin(theta)}), 1e-9), cfg);
    return top_cluster_size(eig.values, cfg.degeneracy_tol);
}

/// Extreme joint expectations within the top eigenspace at direction theta:
/// compress the tangential observable onto the eigenspace and take its
/// spectral endpoints.
inline FlatPortion segment_at(const OperatorTuple& t, double theta, const ToleranceConfig& cfg) {
    const double c = std::cos(theta), s = std::sin(theta);
    const EigDecomposition eig = herm_eig(hermitian_part(direction_matrix(t, {c, s}), 1e-9), cfg);
    const int n = t.dim;
    const int mult = top_cluster_size(eig.values, cfg.degeneracy_tol);
    const double h = eig.values.back();

    // Tangential observable K = -sin(th) T_1 + cos(th) T_2 compressed on the
    // top eigenspace.
    const CMatrix k = -s * t.ops[0].mat() + c * t.ops[1].mat();
    CMatrix basis(n, mult);
    for (int j = 0; j < mult; ++j)
        for (int i = 0; i < n; ++i) basis.at(i, j) = eig.vectors.at(i, n - mult + j);
    const CMatrix kc = basis.adjoint() * (k * basis);
    const EigDecomposition ke = herm_eig(hermitian_part(kc, 1e-8), cfg);
    const double tlo = ke.values.front(), thi = ke.values.back();

    FlatPortion f;
    f.theta = theta;
    const cplx rot = std::polar(1.0, theta);
    f.a = rot * cplx(h, tlo);
    f.b = rot * cplx(h, thi);
    return f;
}

} // namespace detail

/// Directions theta where the boundary of W(A) contains a line segment.
/// Sampled multiplicities catch segments whose normals hit the grid; jumps of
/// the support point between grid angles are bisection-refined to 1e-10 and
/// confirmed by the eigenvalue cluster test.
inline std::vector<FlatPortion> flat_portions(const CMatrix& a, int samples,
                                              const ToleranceConfig& cfg = {}) {
    if (!a.is_square()) throw invalid_input("flat_portions: matrix must be square");
    const OperatorTuple t = cartesian_pair(a);
    const int n = t.dim;
    std::vector<FlatPortion> out;
    if (n < 2) return out;

    std::vector<cplx> contact(samples);
    std::vector<int> mult(samples);
    double diam = 0;
    for (int k = 0; k < samples; ++k) {
        const double th = 2.0 * M_PI * k / samples;
        contact[k] = detail::support_contact(t, th, cfg);
        mult[k] = detail::top_multiplicity(t, th, cfg);
    }
    for (int k = 0; k < samples; ++k)
        diam = std::max(diam, std::abs(contact[k] - contact[(k + samples / 2) % samples]));
    const double scale = std::max(diam, 1e-12);
    const double seg_min = 1e-7 * scale; // shorter jumps are curvature, not flats

    auto push_unique = [&](const FlatPortion& f) {
        for (const auto& g : out) {
            double d = std::fmod(std::abs(g.theta - f.theta), 2 * M_PI);
            d = std::min(d, 2 * M_PI - d);
            if (d < 1e-6 && std::abs(g.a - f.a) < 1e-5 * scale) return;
        }
        out.push_back(f);
    };

    const double step = 2.0 * M_PI / samples;
    for (int k = 0; k < samples; ++k) {
        const double th = step * k;
        if (mult[k] >= 2) {
            const FlatPortion f = detail::segment_at(t, th, cfg);
            if (std::abs(f.b - f.a) > seg_min) push_unique(f);
            continue;
        }
        // Jump detection between this grid angle and the next.
        const int k2 = (k + 1) % samples;
        if (mult[k2] >= 2) continue; // handled at its own grid point
        const double jump = std::abs(contact[k2] - contact[k]);
        if (jump <= std::max(4.0 * step * scale, seg_min)) continue;

        double lo = th, hi = th + step;
        cplx plo = contact[k], phi_pt = contact[k2];
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            const cplx pm = detail::support_contact(t, mid, cfg);
            if (std::abs(pm - plo) <= std::abs(pm - phi_pt)) {
                lo = mid;
                plo = pm;
            } else {
                hi = mid;
                phi_pt = pm;
            }
        }
        const double thc = 0.5 * (lo + hi);
        if (detail::top_multiplicity(t, thc, cfg) >= 2) {
            const FlatPortion f = detail::segment_at(t, thc, cfg);
            if (std::abs(f.b - f.a) > seg_min) push_unique(f);
        }
    }
    return out;
}

} // namespace omax
