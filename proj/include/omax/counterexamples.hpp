#pragma once

#include <array>
#include <optional>

#include "omax/shape.hpp"

namespace omax {

namespace detail {

/// Outward normal angle of an ellipse at eccentric parameter t.
inline double normal_angle_at(const EllipseDisk& e, double t) {
    return e.phi + std::atan2(e.p * std::sin(t), e.q * std::cos(t));
}

inline double blocks_max_support(const std::vector<EllipseDisk>& gs, double theta, int skip) {
    double h = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < gs.size(); ++i)
        if (static_cast<int>(i) != skip) h = std::max(h, ellipse_support(gs[i], theta));
    return h;
}

/// Pick a boundary point on the arc that no other block's range touches:
/// scan normal directions inside the arc and keep the one with the largest
/// support gap over the other blocks.
inline std::pair<cplx, double> exposed_point_on_arc(const BoundaryPiece& arc,
                                                    const std::vector<EllipseDisk>& gs) {
    const EllipseDisk& e = arc.arc_ellipse;
    double best_gap = -std::numeric_limits<double>::infinity();
    cplx best_pt = 0;
    double best_nu = 0;
    const int probes = 64;
    for (int k = 1; k < probes; ++k) {
        const double t = arc.angle_start +
                         (arc.angle_end - arc.angle_start) * (0.1 + 0.8 * k / probes);
        const double nu = normal_angle_at(e, t);
        const double gap = ellipse_support(e, nu) - blocks_max_support(gs, nu, arc.source_block);
        if (gap > best_gap) {
            best_gap = gap;
            best_pt = ellipse_point(e, t);
            best_nu = nu;
        }
    }
    (void)best_nu;
    return {best_pt, best_gap};
}

inline OperatorTuple block_pair(const BlockList& a) { return cartesian_pair(a.assemble()); }

} // namespace detail

/// Case 1 counterexample: the boundary shows non-degenerate elliptic arcs
/// from two distinct 2x2 summands. A thin ellipse whose major axis joins
/// exposed points of the two arcs is included in W(A) but admits no dilation.
/// The minor axis is the largest d <= |mu1 - mu2|/4 for which inclusion holds
/// with margin >= 10 * support_gap_tol; the ellipse is pulled inward by 1e-3
/// so the margin is strict in every direction, tips included.
inline CMatrix counterexample_case1(const BlockList& a, const ToleranceConfig& cfg = {}) {
    const BoundaryDecomposition dec = boundary_decompose(a, cfg);
    const BoundaryPiece* arc1 = nullptr;
    const BoundaryPiece* arc2 = nullptr;
    for (const auto& p : dec.pieces) {
        if (p.kind != PieceKind::Arc) continue;
        if (!arc1) {
            arc1 = &p;
        } else if (p.source_block != arc1->source_block && !arc2) {
            arc2 = &p;
        }
    }
    if (!arc1 || !arc2)
        throw invalid_input("counterexample_case1: need arcs from two distinct blocks");

    const auto [mu1, gap1] = detail::exposed_point_on_arc(*arc1, dec.geometry);
    const auto [mu2, gap2] = detail::exposed_point_on_arc(*arc2, dec.geometry);
    if (gap1 <= 0 || gap2 <= 0)
        throw invalid_input("counterexample_case1: arcs are not exposed beyond the other blocks");

    const OperatorTuple at = detail::block_pair(a);
    const cplx center = 0.5 * (mu1 + mu2);
    const double halflen = 0.5 * std::abs(mu2 - mu1);
    const double phi = std::arg(mu2 - mu1);
    const double inward = 1.0 - 1e-3;

    auto admissible = [&](double d) {
        const EllipseDisk e = canonical_ellipse(center, inward * halflen, inward * d, phi);
        const InclusionReport inc = includes(cartesian_pair(matrix_of_ellipse(e)), at, 720, cfg);
        return inc.worst_gap <= -10.0 * cfg.support_gap_tol;
    };

    double hi = halflen / 2.0; // d <= |mu1 - mu2| / 4
    double d = 0;
    if (admissible(hi)) {
        d = hi;
    } else {
        double lo = 1e-6 * halflen;
        if (!admissible(lo))
            throw construction_failure("counterexample_case1: no admissible minor axis");
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (admissible(mid) ? lo : hi) = mid;
        }
        d = lo;
    }
    return matrix_of_ellipse(canonical_ellipse(center, inward * halflen, inward * d, phi));
}

namespace detail {

struct HullLine {
    cplx point;  // a point on the line
    cplx dir;    // unit direction (ccw traversal)
    cplx inward; // unit inward normal (interior on the left of dir)
};

inline HullLine line_of(const BoundaryPiece& seg) {
    HullLine l;
    l.point = seg.seg_a;
    l.dir = (seg.seg_b - seg.seg_a) / std::abs(seg.seg_b - seg.seg_a);
    l.inward = l.dir * cplx(0, 1);
    return l;
}

inline double dist_to_line(const HullLine& l, cplx z) {
    return ((z - l.point) * std::conj(l.dir)).imag(); // signed; positive inside
}

struct VertexPair {
    cplx vertex;
    HullLine l1, l2;
};

/// Hull vertices formed by two consecutive boundary segments.
inline std::vector<VertexPair> segment_vertices(const std::vector<BoundaryPiece>& pieces,
                                                double join_tol) {
    std::vector<VertexPair> out;
    const size_t n = pieces.size();
    for (size_t i = 0; i < n; ++i) {
        const BoundaryPiece& p = pieces[i];
        const BoundaryPiece& q = pieces[(i + 1) % n];
        if (p.kind != PieceKind::Segment || q.kind != PieceKind::Segment) continue;
        if (std::abs(p.seg_b - q.seg_a) > join_tol) continue;
        out.push_back({p.seg_b, line_of(p), line_of(q)});
    }
    return out;
}

} // namespace detail

/// Case 2 counterexample: two hull vertices, each formed by a pair of
/// consecutive boundary segments, with the open segment between them interior
/// to W(A). A circle tangent to at least three of the four vertex lines and
/// contained in W(A) carries no dilation; candidates come from solving the
/// three-line tangency system for every triple (this also covers the
/// coinciding-bisector picture, where the circle touches all four).
inline CMatrix counterexample_case2(const BlockList& a, const ToleranceConfig& cfg = {}) {
    const BoundaryDecomposition dec = boundary_decompose(a, cfg);
    const double scale = std::max(1.0, dec.scale);
    const auto verts = detail::segment_vertices(dec.pieces, 1e-6 * scale);
    if (verts.size() < 2)
        throw invalid_input("counterexample_case2: need two vertices of consecutive segments");

    const OperatorTuple at = detail::block_pair(a);
    auto interior_margin = [&](cplx z) {
        double margin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 360; ++k) {
            const double th = 2.0 * M_PI * k / 360;
            const double h = support(at, {std::cos(th), std::sin(th)}, cfg).value;
            margin = std::min(margin, h - (z.real() * std::cos(th) + z.imag() * std::sin(th)));
        }
        return margin;
    };

    // Pick the vertex pair whose connecting open segment is deepest inside.
    int best_i = -1, best_j = -1;
    double best_margin = 1e-7 * scale;
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j) {
            double m = std::numeric_limits<double>::infinity();
            for (double t : {0.25, 0.5, 0.75})
                m = std::min(m, interior_margin(verts[i].vertex +
                                                t * (verts[j].vertex - verts[i].vertex)));
            if (m > best_margin) {
                best_margin = m;
                best_i = static_cast<int>(i);
                best_j = static_cast<int>(j);
            }
        }
    if (best_i < 0)
        throw invalid_input("counterexample_case2: no vertex pair with interior open segment");

    const std::array<detail::HullLine, 4> lines{verts[best_i].l1, verts[best_i].l2,
                                                verts[best_j].l1, verts[best_j].l2};

    // Circle tangent to a triple of lines from inside: linear in (cx, cy, r).
    double best_r = 0;
    cplx best_c = 0;
    for (int skip = 0; skip < 4; ++skip) {
        double m[3][4];
        int row = 0;
        for (int i = 0; i < 4; ++i) {
            if (i == skip) continue;
            const cplx n = lines[i].inward;
            m[row][0] = n.real();
            m[row][1] = n.imag();
            m[row][2] = -1.0;
            m[row][3] = n.real() * lines[i].point.real() + n.imag() * lines[i].point.imag();
            ++row;
        }
        // Gaussian elimination on the 3x4 system.
        bool singular = false;
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r2 = col + 1; r2 < 3; ++r2)
                if (std::abs(m[r2][col]) > std::abs(m[piv][col])) piv = r2;
            if (std::abs(m[piv][col]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(m[col], m[piv]);
            for (int r2 = 0; r2 < 3; ++r2) {
                if (r2 == col) continue;
                const double f = m[r2][col] / m[col][col];
                for (int c2 = col; c2 < 4; ++c2) m[r2][c2] -= f * m[col][c2];
            }
        }
        if (singular) continue;
        const cplx center(m[0][3] / m[0][0], m[1][3] / m[1][1]);
        const double r = m[2][3] / m[2][2];
        if (!(r > 1e-6 * scale)) continue;

        int tangents = 0;
        for (const auto& l : lines)
            if (std::abs(detail::dist_to_line(l, center) - r) <= 1e-7 * scale) ++tangents;
        if (tangents < 3) continue;

        // Containment: circle support must not exceed the hull support.
        bool inside = true;
        for (int k = 0; k < 720 && inside; ++k) {
            const double th = 2.0 * M_PI * k / 720;
            const double hb = center.real() * std::cos(th) + center.imag() * std::sin(th) + r;
            if (hb > support(at, {std::cos(th), std::sin(th)}, cfg).value + 1e-7 * scale)
                inside = false;
        }
        if (!inside) continue;
        if (r > best_r) {
            best_r = r;
            best_c = center;
        }
    }
    if (best_r <= 0)
        throw construction_failure("counterexample_case2: no inscribed circle tangent to 3 lines");
    return matrix_of_ellipse(canonical_ellipse(best_c, best_r, best_r, 0));
}

namespace detail {

struct LineForm {
    // l(z) = nx x + ny y - c with unit normal.
    double nx = 0, ny = 0, c = 0;
    double operator()(cplx z) const { return nx * z.real() + ny * z.imag() - c; }
};

inline LineForm line_form(cplx point, cplx direction) {
    const cplx n = direction / std::abs(direction) * cplx(0, 1);
    LineForm l;
    l.nx = n.real();
    l.ny = n.imag();
    l.c = l.nx * point.real() + l.ny * point.imag();
    return l;
}

/// Conic lambda * l1 * lT + M^2 = 0 expanded to quadratic coefficients and
/// converted to center/axes form when it is a real ellipse.
inline std::optional<EllipseDisk> pencil_ellipse(double lambda, const LineForm& l1,
                                                 const LineForm& lt, const LineForm& m) {
    // Quadratic coefficients of the products.
    // l1*lt: (n1.z - c1)(nt.z - ct)
    double A = lambda * l1.nx * lt.nx + m.nx * m.nx;
    double B = lambda * (l1.nx * lt.ny + l1.ny * lt.nx) + 2 * m.nx * m.ny;
    double C = lambda * l1.ny * lt.ny + m.ny * m.ny;
    double D = lambda * (-l1.nx * lt.c - lt.nx * l1.c) - 2 * m.nx * m.c;
    double E = lambda * (-l1.ny * lt.c - lt.ny * l1.c) - 2 * m.ny * m.c;
    double F = lambda * l1.c * lt.c + m.c * m.c;

    const double det = A * C - 0.25 * B * B;
    if (det <= 1e-14) return std::nullopt; // not an ellipse
    if (A < 0) {
        A = -A;
        B = -B;
        C = -C;
        D = -D;
        E = -E;
        F = -F;
    }
    // Center solves [[A, B/2], [B/2, C]] z = -(D/2, E/2).
    const double cx = (-0.5 * D * C + 0.25 * B * E) / det;
    const double cy = (-0.5 * E * A + 0.25 * B * D) / det;
    const double k = -(A * cx * cx + B * cx * cy + C * cy * cy + D * cx + E * cy + F);
    if (k <= 0) return std::nullopt;
    // Eigenvalues of the quadratic form.
    const double tr = A + C;
    const double rad = std::sqrt(std::max((A - C) * (A - C) + B * B, 0.0));
    const double lmin = 0.5 * (tr - rad), lmax = 0.5 * (tr + rad);
    if (lmin <= 0) return std::nullopt;
    const double p = std::sqrt(k / lmin), q = std::sqrt(k / lmax);
    double phi;
    if (rad < 1e-15) {
        phi = 0;
    } else {
        // Eigenvector of [[A, B/2], [B/2, C]] for lmin.
        const double vx = (std::abs(B) > 1e-15) ? 0.5 * B : ((A < C) ? 1.0 : 0.0);
        const double vy = (std::abs(B) > 1e-15) ? (lmin - A) : ((A < C) ? 0.0 : 1.0);
        phi = std::atan2(vy, vx);
    }
    return canonical_ellipse(cplx(cx, cy), p, q, phi);
}

} // namespace detail

/// Case 3 counterexample: three consecutive boundary segments and one arc,
/// with the middle segment not tangent to the arc's ellipse. Within the
/// pencil of conics tangent to L1 at mu and to the arc's tangent line at a
/// fixed exposed arc point mu3, the member through the arc's own ellipse is
/// slid from p1 toward alpha until it also touches L2; the touching member is
/// the counterexample range.
inline CMatrix counterexample_case3(const BlockList& a, const ToleranceConfig& cfg = {}) {
    const BoundaryDecomposition dec = boundary_decompose(a, cfg);
    const double scale = std::max(1.0, dec.scale);

    int arcs = 0, segs = 0;
    size_t arc_at = 0;
    for (size_t i = 0; i < dec.pieces.size(); ++i) {
        if (dec.pieces[i].kind == PieceKind::Arc) {
            ++arcs;
            arc_at = i;
        } else if (dec.pieces[i].kind == PieceKind::Segment) {
            ++segs;
        }
    }
    if (arcs != 1 || segs != 3 || dec.pieces.size() != 4)
        throw invalid_input("counterexample_case3: boundary must be one arc plus three segments");

    const BoundaryPiece& arc = dec.pieces[arc_at];
    const BoundaryPiece& s1 = dec.pieces[(arc_at + 1) % 4];
    const BoundaryPiece& s2 = dec.pieces[(arc_at + 2) % 4];
    const EllipseDisk& e3 = arc.arc_ellipse;

    if (segment_tangent_to_ellipse({s2.seg_a, s2.seg_b}, e3, 1e-7 * scale))
        throw invalid_input("counterexample_case3: middle segment tangent to the arc (maximal)");

    const cplx p1 = s1.seg_a;    // on the arc
    const cplx alpha = s1.seg_b; // L1 meets L2 here

    // Exposed point on the arc, away from its ends, plus its tangent line.
    const double tmid = 0.5 * (arc.angle_start + arc.angle_end);
    const cplx mu3 = ellipse_point(e3, tmid);
    const double nu3 = detail::normal_angle_at(e3, tmid);
    const detail::LineForm lt =
        detail::line_form(mu3, std::polar(1.0, nu3 + M_PI_2)); // tangent at mu3
    const detail::LineForm l1 = detail::line_form(p1, alpha - p1);
    const detail::LineForm l2 = detail::line_form(s2.seg_a, s2.seg_b - s2.seg_a);

    // lambda pinned so that at mu = p1 the pencil member is the arc's ellipse:
    // evaluate on a third point of that ellipse.
    const detail::LineForm m_p1 = detail::line_form(p1, mu3 - p1);
    double lambda = 0;
    {
        double best = 0;
        for (int k = 0; k < 32; ++k) {
            const cplx z = ellipse_point(e3, 2.0 * M_PI * k / 32);
            const double denom = l1(z) * lt(z);
            if (std::abs(denom) > std::abs(best)) {
                best = denom;
                lambda = -m_p1(z) * m_p1(z) / denom;
            }
        }
        if (best == 0) throw construction_failure("counterexample_case3: degenerate pencil");
    }

    // Penetration of the pencil member past L2: positive means crossing.
    auto member = [&](double t) -> std::optional<EllipseDisk> {
        const cplx mu = alpha + t * (p1 - alpha);
        return detail::pencil_ellipse(lambda, l1, lt, detail::line_form(mu, mu3 - mu));
    };
    auto penetration = [&](const EllipseDisk& e) {
        // L2's interior side is l2 > 0; the member must stay there.
        const double na = std::atan2(-l2.ny, -l2.nx); // outward normal direction
        return ellipse_support(e, na) - (-l2.c);
    };

    double t_hi = 1.0; // at p1: the arc's own ellipse, separated from L2
    auto e_hi = member(t_hi);
    if (!e_hi || penetration(*e_hi) >= 0)
        throw construction_failure("counterexample_case3: pencil member at p1 is not separated");
    double t_lo = -1;
    for (int k = 1; k <= 64; ++k) {
        const double t = 1.0 - static_cast<double>(k) / 64;
        const auto e = member(t);
        if (!e) break;
        if (penetration(*e) > 0) {
            t_lo = t;
            break;
        }
        t_hi = t;
    }
    if (t_lo < 0)
        throw construction_failure("counterexample_case3: no sign change against L2");
    for (int it = 0; it < 80; ++it) {
        const double tm = 0.5 * (t_lo + t_hi);
        const auto e = member(tm);
        if (!e) {
            t_lo = tm;
            continue;
        }
        (penetration(*e) > 0 ? t_lo : t_hi) = tm;
    }
    const auto final_e = member(t_hi);
    if (!final_e) throw construction_failure("counterexample_case3: degenerate member at the root");

    const CMatrix b = matrix_of_ellipse(*final_e);
    const InclusionReport inc = includes(cartesian_pair(b), detail::block_pair(a), 720, cfg);
    if (!inc.included)
        throw construction_failure("counterexample_case3: constructed ellipse leaves W(A)");
    return b;
}

} // namespace omax
