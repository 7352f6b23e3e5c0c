#pragma once

#include <string>

#include "omax/choi_solver.hpp"
#include "omax/counterexamples.hpp"
#include "omax/rank_one_normal.hpp"

namespace omax {

enum class OmaxStatus { OMAX, NotOMAX, Unknown };

enum class OmaxRule {
    D1,
    D2,
    D3,
    Simplex,
    RankOneNormal,
    SpanningSet,
    Composed,
    Case1,
    Case2,
    Case3,
    None
};

inline const char* status_name(OmaxStatus s) {
    switch (s) {
    case OmaxStatus::OMAX: return "OMAX";
    case OmaxStatus::NotOMAX: return "NotOMAX";
    default: return "Unknown";
    }
}

inline const char* rule_name(OmaxRule r) {
    switch (r) {
    case OmaxRule::D1: return "d.1";
    case OmaxRule::D2: return "d.2";
    case OmaxRule::D3: return "d.3";
    case OmaxRule::Simplex: return "simplex";
    case OmaxRule::RankOneNormal: return "rank-one-normal";
    case OmaxRule::SpanningSet: return "spanning-set";
    case OmaxRule::Composed: return "composed";
    case OmaxRule::Case1: return "case1";
    case OmaxRule::Case2: return "case2";
    case OmaxRule::Case3: return "case3";
    default: return "none";
    }
}

/// Classification outcome with a machine-checkable certificate: the reduced
/// block pair and tangency point on the maximal side, or a counterexample B
/// with its verified infeasibility on the non-maximal side.
struct OmaxVerdict {
    OmaxStatus status = OmaxStatus::Unknown;
    OmaxRule rule = OmaxRule::None;
    ShapeClass shape;
    std::optional<CMatrix> reduced;            // \hat A_1 realizing W(A)
    std::optional<cplx> tangency;              // a_0 for rule d.3
    std::optional<RankOneNormal> rank_one;
    std::optional<CMatrix> counterexample;     // B in M_2
    std::optional<FeasibilityResult> feasibility;
    int forwarded_from = 0;                    // compose: 1 or 2
    std::string note;
};

/// Geometric classifier for direct sums of 1x1 and 2x2 blocks. The maximal
/// shapes map to rules d.1-d.3; anything else dispatches the matching
/// counterexample construction and demands a verified infeasibility before
/// asserting NotOMAX. A solver stall or a near-degenerate geometry yields
/// Unknown, never a guess.
inline OmaxVerdict classify_direct_sum(const BlockList& a, const ToleranceConfig& cfg = {}) {
    OmaxVerdict v;
    v.shape = shape_of(a, cfg);

    if (v.shape.near_degenerate) {
        v.note = "geometry inside the tolerance band; refusing to decide";
        return v;
    }

    switch (v.shape.tag) {
    case ShapeTag::Singleton:
        v.status = OmaxStatus::OMAX;
        v.rule = OmaxRule::D1;
        v.reduced = CMatrix::from_rows({{v.shape.points.front()}});
        return v;
    case ShapeTag::Segment:
        v.status = OmaxStatus::OMAX;
        v.rule = OmaxRule::D1;
        v.reduced = CMatrix::diag({v.shape.segment->first, v.shape.segment->second});
        return v;
    case ShapeTag::EllipticalDisk:
        v.status = OmaxStatus::OMAX;
        v.rule = OmaxRule::D1;
        v.reduced = matrix_of_ellipse(*v.shape.ellipse);
        return v;
    case ShapeTag::TriangularDisk:
        v.status = OmaxStatus::OMAX;
        v.rule = OmaxRule::D2;
        v.reduced = CMatrix::diag({v.shape.points[0], v.shape.points[1], v.shape.points[2]});
        return v;
    case ShapeTag::EllipsePlusPoint:
        v.status = OmaxStatus::OMAX;
        v.rule = OmaxRule::D2;
        v.reduced = direct_sum({CMatrix::from_rows({{v.shape.points.front()}}),
                                matrix_of_ellipse(*v.shape.ellipse)});
        return v;
    case ShapeTag::EllipsePlusTangentSegment:
        v.status = OmaxStatus::OMAX;
        v.rule = OmaxRule::D3;
        v.reduced = direct_sum({CMatrix::diag({v.shape.segment->first, v.shape.segment->second}),
                                matrix_of_ellipse(*v.shape.ellipse)});
        v.tangency = v.shape.tangency;
        return v;
    case ShapeTag::Other:
        break;
    }

    // Non-maximal geometry: construct and verify a counterexample.
    int arcs = 0, segs = 0;
    int first_arc_block = -1;
    bool two_arc_blocks = false;
    for (const auto& p : v.shape.boundary.pieces) {
        if (p.kind == PieceKind::Arc) {
            ++arcs;
            if (first_arc_block < 0)
                first_arc_block = p.source_block;
            else if (p.source_block != first_arc_block)
                two_arc_blocks = true;
        } else if (p.kind == PieceKind::Segment) {
            ++segs;
        }
    }

    CMatrix b0(2, 2);
    try {
        if (arcs >= 2 && two_arc_blocks) {
            v.rule = OmaxRule::Case1;
            b0 = counterexample_case1(a, cfg);
        } else if (arcs == 1 && segs == 3) {
            v.rule = OmaxRule::Case3;
            b0 = counterexample_case3(a, cfg);
        } else {
            v.rule = OmaxRule::Case2;
            b0 = counterexample_case2(a, cfg);
        }
    } catch (const construction_failure& e) {
        v.rule = OmaxRule::None;
        v.note = std::string("counterexample construction failed: ") + e.what();
        return v;
    } catch (const invalid_input& e) {
        v.rule = OmaxRule::None;
        v.note = std::string("counterexample preconditions unmet: ") + e.what();
        return v;
    }

    // Pull the certificate strictly inside before verifying.
    const CMatrix b = matrix_of_ellipse(shrink_ellipse(ellipse_of_2x2(b0, cfg), 1.0 - 1e-3));
    const OperatorTuple at = cartesian_pair(a.assemble());
    const OperatorTuple bt = cartesian_pair(b);
    const InclusionReport inc = includes(bt, at, 720, cfg);
    if (inc.worst_gap > -10.0 * cfg.support_gap_tol) {
        v.note = "counterexample lacks the inclusion margin";
        return v;
    }
    v.counterexample = b;
    v.feasibility = choi_feasibility(at, bt, cfg);
    if (v.feasibility->status == Feasibility::Infeasible) {
        v.status = OmaxStatus::NotOMAX;
    } else {
        v.status = OmaxStatus::Unknown;
        v.note = "geometric evidence only; the dilation SDP did not refute";
    }
    return v;
}

/// Verdict algebra for padded direct sums: the composed system is maximal
/// exactly when both summands are; a summand counterexample is forwarded.
inline OmaxVerdict compose_direct_sum_omax(const OmaxVerdict& v1, const OmaxVerdict& v2) {
    OmaxVerdict out;
    out.rule = OmaxRule::Composed;
    if (v1.status == OmaxStatus::OMAX && v2.status == OmaxStatus::OMAX) {
        out.status = OmaxStatus::OMAX;
        return out;
    }
    for (int which = 1; which <= 2; ++which) {
        const OmaxVerdict& v = (which == 1) ? v1 : v2;
        if (v.status == OmaxStatus::NotOMAX) {
            out.status = OmaxStatus::NotOMAX;
            out.counterexample = v.counterexample;
            out.feasibility = v.feasibility;
            out.forwarded_from = which;
            out.note = "counterexample forwarded from summand " + std::to_string(which) +
                       " through its inclusion map";
            return out;
        }
    }
    out.status = OmaxStatus::Unknown;
    return out;
}

/// Sufficient condition for maximality of span{I, A, A*}: a rank-one normal
/// member of the span. Absence proves nothing, so the negative side is
/// Unknown.
inline OmaxVerdict classify_rank_one(const CMatrix& a, int samples = 3600,
                                     const ToleranceConfig& cfg = {}) {
    OmaxVerdict v;
    if (auto r = rank_one_normal_in_span(a, samples, cfg)) {
        v.status = OmaxStatus::OMAX;
        v.rule = OmaxRule::RankOneNormal;
        v.rank_one = r;
    }
    return v;
}

} // namespace omax
