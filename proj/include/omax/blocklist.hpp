#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "omax/ellipse.hpp"
#include "omax/matfun.hpp"

namespace omax {

/// Direct sum of 1x1 and 2x2 blocks, the inputs of the direct-sum classifier.
struct BlockList {
    std::vector<CMatrix> blocks;

    explicit BlockList(std::vector<CMatrix> bs) : blocks(std::move(bs)) {
        if (blocks.empty()) throw invalid_input("BlockList: need at least one block");
        for (const auto& b : blocks) {
            if (!b.is_square() || b.rows() > 2)
                throw invalid_input("BlockList: blocks must be 1x1 or 2x2");
            if (!b.all_finite()) throw invalid_input("BlockList: entries must be finite");
        }
    }

    int total_dim() const {
        int n = 0;
        for (const auto& b : blocks) n += b.rows();
        return n;
    }

    CMatrix assemble() const { return direct_sum(blocks); }
};

enum class PieceKind { Arc, Segment, Point };

/// One maximal piece of the boundary of W(A), in counterclockwise order.
/// Arcs carry the ellipse and an eccentric-parameter range; segments carry
/// endpoints in traversal order.
struct BoundaryPiece {
    PieceKind kind = PieceKind::Point;
    EllipseDisk arc_ellipse;
    double angle_start = 0;
    double angle_end = 0;
    cplx seg_a{0, 0};
    cplx seg_b{0, 0};
    cplx point{0, 0};
    int source_block = -1; // bridge segments carry the block they leave

    cplx start() const {
        switch (kind) {
        case PieceKind::Arc: return ellipse_point(arc_ellipse, angle_start);
        case PieceKind::Segment: return seg_a;
        default: return point;
        }
    }
    cplx end() const {
        switch (kind) {
        case PieceKind::Arc: return ellipse_point(arc_ellipse, angle_end);
        case PieceKind::Segment: return seg_b;
        default: return point;
        }
    }
};

struct BoundaryDecomposition {
    std::vector<BoundaryPiece> pieces;
    std::vector<int> redundant_blocks;      // dropped from boundary attribution
    std::vector<int> near_redundant_blocks; // inside the 10x tolerance band
    std::vector<EllipseDisk> geometry;      // per original block
    double scale = 1;                       // diameter of W(A)
    bool degenerate = false;                // hull is a point or a segment
};

namespace detail {

struct ArgmaxRun {
    int block = -1;
    double theta_a = 0;
    double theta_b = 0;
};

inline double blocks_support(const std::vector<EllipseDisk>& gs, const std::vector<int>& active,
                             double theta, int skip = -1) {
    double h = -std::numeric_limits<double>::infinity();
    for (int i : active)
        if (i != skip) h = std::max(h, ellipse_support(gs[i], theta));
    return h;
}

inline int blocks_argmax(const std::vector<EllipseDisk>& gs, const std::vector<int>& active,
                         double theta) {
    double h = -std::numeric_limits<double>::infinity();
    int arg = active.front();
    for (int i : active) {
        const double hi = ellipse_support(gs[i], theta);
        if (hi > h) {
            h = hi;
            arg = i;
        }
    }
    return arg;
}

} // namespace detail

/// Boundary of conv(union of the block ranges) as maximal arcs, segments and
/// points in counterclockwise order. Blocks whose range is interior to the
/// hull of the others are dropped from attribution and recorded; blocks
/// within 10x of the drop tolerance are flagged near-redundant so callers can
/// refuse to classify a knife-edge configuration.
inline BoundaryDecomposition boundary_decompose(const BlockList& a,
                                                const ToleranceConfig& cfg = {}) {
    BoundaryDecomposition out;
    const int nblocks = static_cast<int>(a.blocks.size());
    for (const auto& b : a.blocks)
        out.geometry.push_back(b.rows() == 1 ? canonical_ellipse(b.at(0, 0), 0, 0, 0)
                                             : ellipse_of_2x2(b, cfg));
    const std::vector<EllipseDisk>& gs = out.geometry;

    const int grid = 720;
    std::vector<int> active(nblocks);
    for (int i = 0; i < nblocks; ++i) active[i] = i;

    // Diameter of the hull, for scaling tolerances.
    double diam = 0;
    for (int k = 0; k < grid / 2; ++k) {
        const double th = 2.0 * M_PI * k / grid;
        diam = std::max(diam, detail::blocks_support(gs, active, th) +
                                  detail::blocks_support(gs, active, th + M_PI));
    }
    out.scale = std::max(diam, 1e-12);
    const double drop_tol = 1e-9 * std::max(1.0, out.scale);

    // Redundant-block reduction: drop any block whose removal leaves the
    // sampled support function unchanged; iterate to a fixed point.
    bool changed = true;
    while (changed && active.size() > 1) {
        changed = false;
        for (size_t idx = 0; idx < active.size(); ++idx) {
            const int j = active[idx];
            double pokeout = 0;
            for (int k = 0; k < grid; ++k) {
                const double th = 2.0 * M_PI * k / grid;
                pokeout = std::max(pokeout, detail::blocks_support(gs, active, th) -
                                                detail::blocks_support(gs, active, th, j));
                if (pokeout > 10 * drop_tol) break;
            }
            if (pokeout < drop_tol) {
                out.redundant_blocks.push_back(j);
                active.erase(active.begin() + idx);
                changed = true;
                break;
            }
            if (pokeout <= 10 * drop_tol) {
                if (std::find(out.near_redundant_blocks.begin(), out.near_redundant_blocks.end(),
                              j) == out.near_redundant_blocks.end())
                    out.near_redundant_blocks.push_back(j);
            }
        }
    }

    // Degenerate hulls: a point, or all contacts on one line.
    {
        std::vector<cplx> contacts;
        for (int k = 0; k < grid; ++k)
            contacts.push_back(
                ellipse_contact(gs[detail::blocks_argmax(gs, active, 2.0 * M_PI * k / grid)],
                                2.0 * M_PI * k / grid));
        cplx far_a = contacts[0], far_b = contacts[0];
        for (const cplx z : contacts)
            for (const cplx w : {far_a, far_b})
                if (std::abs(z - w) > std::abs(far_a - far_b)) {
                    far_a = z;
                    far_b = w;
                }
        if (std::abs(far_a - far_b) <= drop_tol) {
            BoundaryPiece p;
            p.kind = PieceKind::Point;
            p.point = far_a;
            p.source_block = active.front();
            out.pieces.push_back(p);
            out.degenerate = true;
            return out;
        }
        bool collinear = true;
        const cplx dir = (far_b - far_a) / std::abs(far_b - far_a);
        for (const cplx z : contacts) {
            const cplx rel = (z - far_a) * std::conj(dir);
            if (std::abs(rel.imag()) > drop_tol) {
                collinear = false;
                break;
            }
        }
        if (collinear) {
            BoundaryPiece p;
            p.kind = PieceKind::Segment;
            p.seg_a = far_a;
            p.seg_b = far_b;
            p.source_block = detail::blocks_argmax(
                gs, active, std::arg(far_b - far_a));
            out.pieces.push_back(p);
            out.degenerate = true;
            return out;
        }
    }

    // Argmax runs over the direction circle with bisection-refined switches.
    std::vector<detail::ArgmaxRun> runs;
    {
        const int fine = 2880;
        std::vector<int> amax(fine);
        for (int k = 0; k < fine; ++k)
            amax[k] = detail::blocks_argmax(gs, active, 2.0 * M_PI * k / fine);
        int start = 0;
        while (start < fine && amax[start] == amax[(start + fine - 1) % fine]) ++start;
        if (start == fine) {
            runs.push_back({amax[0], 0.0, 2.0 * M_PI}); // single block dominates everywhere
        } else {
            auto refine = [&](double lo, double hi, int bi, int bj) {
                // h_bi - h_bj changes sign in [lo, hi].
                for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (ellipse_support(gs[bi], mid) >= ellipse_support(gs[bj], mid))
                        lo = mid;
                    else
                        hi = mid;
                }
                return 0.5 * (lo + hi);
            };
            int k = start;
            const double step = 2.0 * M_PI / fine;
            while (true) {
                const int blk = amax[k % fine];
                int k2 = k;
                while (amax[(k2 + 1) % fine] == blk && k2 < k + fine) ++k2;
                const int nxt = amax[(k2 + 1) % fine];
                const double lo = step * k2, hi = step * (k2 + 1);
                const double cross = refine(lo, hi, blk, nxt);
                const double run_start = runs.empty() ? step * k : runs.back().theta_b;
                runs.push_back({blk, run_start, cross});
                k = k2 + 1;
                if (k >= start + fine) break;
            }
            // Close the cycle: first run actually starts at the last crossing.
            runs.front().theta_a = runs.back().theta_b - 2.0 * M_PI;
        }
    }

    // Emit pieces per run and bridge segments between runs.
    const double join_tol = 1e-9 * std::max(1.0, out.scale);
    std::vector<BoundaryPiece> pieces;
    auto emit_segment = [&](cplx from, cplx to, int source) {
        if (std::abs(to - from) <= join_tol) return;
        BoundaryPiece p;
        p.kind = PieceKind::Segment;
        p.seg_a = from;
        p.seg_b = to;
        p.source_block = source;
        pieces.push_back(p);
    };

    for (size_t ri = 0; ri < runs.size(); ++ri) {
        const detail::ArgmaxRun& run = runs[ri];
        const EllipseDisk& g = gs[run.block];
        if (g.is_point()) {
            // vertex; bridges connect through it
        } else if (g.is_segment()) {
            // The contact jumps across an endpoint at the segment's normals.
            for (double normal : {g.phi + M_PI_2, g.phi + 3 * M_PI_2}) {
                double ν = normal;
                while (ν <= run.theta_a) ν += 2 * M_PI;
                while (ν > run.theta_a + 2 * M_PI) ν -= 2 * M_PI;
                if (ν > run.theta_a + 1e-12 && ν < run.theta_b - 1e-12)
                    emit_segment(ellipse_contact(g, ν - 1e-9), ellipse_contact(g, ν + 1e-9),
                                 run.block);
            }
        } else {
            BoundaryPiece p;
            p.kind = PieceKind::Arc;
            p.arc_ellipse = g;
            const double psi_a = run.theta_a - g.phi, psi_b = run.theta_b - g.phi;
            double ta = std::atan2(g.q * std::sin(psi_a), g.p * std::cos(psi_a));
            double tb = std::atan2(g.q * std::sin(psi_b), g.p * std::cos(psi_b));
            if (run.theta_b - run.theta_a >= 2 * M_PI - 1e-9) {
                tb = ta + 2 * M_PI;
            } else {
                while (tb <= ta) tb += 2 * M_PI;
            }
            p.angle_start = ta;
            p.angle_end = tb;
            p.source_block = run.block;
            if (tb - ta > 1e-9) pieces.push_back(p);
        }
        // Bridge to the next run.
        const detail::ArgmaxRun& next = runs[(ri + 1) % runs.size()];
        if (runs.size() > 1 || std::abs(run.theta_b - run.theta_a - 2 * M_PI) > 1e-9) {
            const cplx from = ellipse_contact(gs[run.block], run.theta_b);
            const cplx to = ellipse_contact(gs[next.block], next.theta_a + 1e-15);
            emit_segment(from, to, run.block);
        }
    }

    // Merge consecutive collinear segments (shared endpoint, same direction).
    if (pieces.size() > 1) {
        std::vector<BoundaryPiece> merged;
        for (const auto& p : pieces) {
            if (!merged.empty() && merged.back().kind == PieceKind::Segment &&
                p.kind == PieceKind::Segment) {
                BoundaryPiece& prev = merged.back();
                const cplx d1 = prev.seg_b - prev.seg_a, d2 = p.seg_b - p.seg_a;
                const double cross = (std::conj(d1) * d2).imag();
                if (std::abs(prev.seg_b - p.seg_a) <= 10 * join_tol &&
                    std::abs(cross) <= 10 * join_tol * std::abs(d1)) {
                    prev.seg_b = p.seg_b;
                    continue;
                }
            }
            merged.push_back(p);
        }
        // Wrap-around merge of first and last.
        if (merged.size() > 1 && merged.front().kind == PieceKind::Segment &&
            merged.back().kind == PieceKind::Segment) {
            const BoundaryPiece& lastp = merged.back();
            BoundaryPiece& firstp = merged.front();
            const cplx d1 = lastp.seg_b - lastp.seg_a, d2 = firstp.seg_b - firstp.seg_a;
            const double cross = (std::conj(d1) * d2).imag();
            if (std::abs(lastp.seg_b - firstp.seg_a) <= 10 * join_tol &&
                std::abs(cross) <= 10 * join_tol * std::abs(d1)) {
                firstp.seg_a = lastp.seg_a;
                merged.pop_back();
            }
        }
        pieces = std::move(merged);
    }

    out.pieces = std::move(pieces);
    return out;
}

} // namespace omax
