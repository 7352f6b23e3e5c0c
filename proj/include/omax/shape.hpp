#pragma once

#include <optional>

#include "omax/blocklist.hpp"

namespace omax {

/// Tangency point of the line through L against the closed elliptical disk E,
/// when the line touches in exactly one point and that point lies on the
/// segment; abs_tol is in the coordinates of the plane. Degenerate E (a
/// segment) counts as tangent when L meets it exactly at one of its
/// endpoints. Decided through support-function penetrations: the minimum of
/// the two one-sided overhangs is zero exactly at tangency, positive for a
/// secant, negative when separated.
inline std::optional<cplx> segment_tangent_to_ellipse(const std::pair<cplx, cplx>& l,
                                                      const EllipseDisk& e,
                                                      double abs_tol = 1e-8) {
    const cplx la = l.first, lb = l.second;
    const double llen = std::abs(lb - la);
    if (llen <= 0) return std::nullopt;
    const cplx dir = (lb - la) / llen;

    auto on_segment = [&](cplx z) {
        const cplx rel = (z - la) * std::conj(dir);
        return rel.real() >= -abs_tol && rel.real() <= llen + abs_tol &&
               std::abs(rel.imag()) <= abs_tol;
    };

    if (e.is_point()) return on_segment(e.center) ? std::optional<cplx>(e.center) : std::nullopt;

    const double na = std::arg(dir) + M_PI_2;
    const double offset = la.real() * std::cos(na) + la.imag() * std::sin(na);
    const double pen_plus = ellipse_support(e, na) - offset;
    const double pen_minus = ellipse_support(e, na + M_PI) + offset;
    const double g = std::min(pen_plus, pen_minus);
    if (std::abs(g) > abs_tol) return std::nullopt; // secant (g > 0) or separated (g < 0)

    if (e.is_segment()) {
        // Both overhangs vanish only for a collinear overlap; otherwise the
        // touch must happen at an endpoint of E.
        if (std::max(pen_plus, pen_minus) <= abs_tol) return std::nullopt;
        const cplx ea = ellipse_point(e, M_PI), eb = ellipse_point(e, 0.0);
        const bool a_on = on_segment(ea), b_on = on_segment(eb);
        if (a_on == b_on) return std::nullopt;
        return a_on ? ea : eb;
    }

    const double contact_angle = (pen_plus <= pen_minus) ? na : na + M_PI;
    const cplx a0 = ellipse_contact(e, contact_angle);
    if (!on_segment(a0)) return std::nullopt;
    return a0;
}

enum class ShapeTag {
    Singleton,
    Segment,
    TriangularDisk,
    EllipticalDisk,
    EllipsePlusPoint,
    EllipsePlusTangentSegment,
    Other
};

inline const char* shape_name(ShapeTag t) {
    switch (t) {
    case ShapeTag::Singleton: return "singleton";
    case ShapeTag::Segment: return "segment";
    case ShapeTag::TriangularDisk: return "triangular-disk";
    case ShapeTag::EllipticalDisk: return "elliptical-disk";
    case ShapeTag::EllipsePlusPoint: return "ellipse-plus-point";
    case ShapeTag::EllipsePlusTangentSegment: return "ellipse-plus-tangent-segment";
    default: return "other";
    }
}

struct ShapeClass {
    ShapeTag tag = ShapeTag::Other;
    std::optional<EllipseDisk> ellipse;   // the dominating ellipse when present
    std::vector<cplx> points;             // singleton, triangle vertices, apex
    std::optional<std::pair<cplx, cplx>> segment; // segment shape or tangent segment
    std::optional<cplx> tangency;         // a0 for the tangent-segment shape
    bool near_degenerate = false;         // inside the refuse-to-guess band
    BoundaryDecomposition boundary;
};

/// Classify the boundary decomposition into the shapes whose operator systems
/// are maximal, or Other. Tangency and redundancy decisions inside 10x of
/// their tolerance mark the result near-degenerate instead of guessing.
inline ShapeClass shape_of(const BlockList& a, const ToleranceConfig& cfg = {}) {
    ShapeClass s;
    s.boundary = boundary_decompose(a, cfg);
    const auto& pieces = s.boundary.pieces;
    s.near_degenerate = !s.boundary.near_redundant_blocks.empty();

    if (s.boundary.degenerate) {
        if (pieces.front().kind == PieceKind::Point) {
            s.tag = ShapeTag::Singleton;
            s.points = {pieces.front().point};
        } else {
            s.tag = ShapeTag::Segment;
            s.segment = {pieces.front().seg_a, pieces.front().seg_b};
        }
        return s;
    }

    int arcs = 0, segs = 0;
    for (const auto& p : pieces) (p.kind == PieceKind::Arc ? arcs : segs)++;

    if (arcs == 0) {
        if (segs == 3) {
            s.tag = ShapeTag::TriangularDisk;
            for (const auto& p : pieces) s.points.push_back(p.seg_a);
        }
        return s; // quadrilaterals and beyond stay Other
    }
    if (arcs >= 2) return s;

    // Exactly one arc.
    size_t arc_at = 0;
    for (size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].kind == PieceKind::Arc) arc_at = i;
    const EllipseDisk& e = pieces[arc_at].arc_ellipse;
    s.ellipse = e;

    if (segs == 0) {
        s.tag = ShapeTag::EllipticalDisk;
        return s;
    }
    if (segs == 2) {
        // Hull of the ellipse and the one vertex shared by the segments.
        const BoundaryPiece& s1 = pieces[(arc_at + 1) % pieces.size()];
        s.tag = ShapeTag::EllipsePlusPoint;
        s.points = {s1.seg_b}; // shared apex: end of the first, start of the second
        return s;
    }
    if (segs == 3) {
        // Cyclic order arc, s1, s2, s3: the middle segment joins two hull
        // vertices; tangency to the arc decides d.3 versus Case 3.
        const BoundaryPiece& mid = pieces[(arc_at + 2) % pieces.size()];
        s.segment = {mid.seg_a, mid.seg_b};
        const double tight = 1e-7 * std::max(1.0, s.boundary.scale);
        if (auto a0 = segment_tangent_to_ellipse(*s.segment, e, tight)) {
            s.tag = ShapeTag::EllipsePlusTangentSegment;
            s.tangency = a0;
            return s;
        }
        if (segment_tangent_to_ellipse(*s.segment, e, 10 * tight)) {
            s.near_degenerate = true; // tangent within the refuse band only
            return s;
        }
        return s;
    }
    return s; // one arc with 1 or >= 4 segments: Other
}

} // namespace omax
