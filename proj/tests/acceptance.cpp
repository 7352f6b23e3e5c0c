// Acceptance suite: one test case per criterion, each printing a PASS line
// when it completes. Criteria 1-4 stash their certificate files so criterion
// 8 can re-verify every one of them through the standalone CLI.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "omax/omax.hpp"

using namespace omax;

namespace {

const std::string cli = OMAX_CLI_PATH;

std::string scratch_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/omax_accept_XXXXXX";
        return std::string(mkdtemp(tmpl));
    }();
    return dir;
}

std::vector<std::string>& emitted_certs() {
    static std::vector<std::string> certs;
    return certs;
}

void stash_cert(const std::string& name, const json& j) {
    const std::string path = scratch_dir() + "/" + name;
    write_json_atomic(path, j);
    emitted_certs().push_back(path);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const CMatrix shift2 = CMatrix::from_rows({{0, 2}, {0, 0}});

BlockList remark_blocks() {
    return BlockList({CMatrix::from_rows({{cplx(1, 1)}}), CMatrix::from_rows({{cplx(1, -1)}}),
                      shift2});
}

BlockList case1_blocks() {
    return BlockList({shift2, CMatrix::scaled_identity(2, 3) + shift2});
}

// ---- independent planar hull oracle (test-only; no support function) ----

struct PlanarCloud {
    std::vector<std::pair<double, double>> pts;
};

PlanarCloud sample_cloud(const CMatrix& a, int trials, Rng& rng) {
    PlanarCloud c;
    c.pts.reserve(trials);
    const CMatrix re = real_part(a), im = imag_part(a);
    for (int t = 0; t < trials; ++t) {
        const std::vector<cplx> x = rng.unit_vector(a.rows());
        c.pts.emplace_back(expectation(re, x), expectation(im, x));
    }
    return c;
}

/// Andrew monotone chain; returns the hull vertices counterclockwise.
std::vector<std::pair<double, double>> convex_hull(std::vector<std::pair<double, double>> p) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    auto cross = [](const auto& o, const auto& a, const auto& b) {
        return (a.first - o.first) * (b.second - o.second) -
               (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> h(2 * p.size());
    size_t k = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    const size_t lower = k + 1;
    for (size_t i = p.size() - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

/// Brute-force inclusion margin of cloud B against the sampled hull of A:
/// min over 360 directions of (hull support of A minus cloud support of B).
double brute_margin(const PlanarCloud& a, const PlanarCloud& b) {
    const auto ha = convex_hull(a.pts);
    const auto hb = convex_hull(b.pts);
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 360; ++k) {
        const double th = 2.0 * M_PI * k / 360;
        const double ux = std::cos(th), uy = std::sin(th);
        double sa = -std::numeric_limits<double>::infinity();
        double sb = -std::numeric_limits<double>::infinity();
        for (const auto& p : ha) sa = std::max(sa, ux * p.first + uy * p.second);
        for (const auto& p : hb) sb = std::max(sb, ux * p.first + uy * p.second);
        margin = std::min(margin, sa - sb);
    }
    return margin;
}

/// True inclusion margin min_theta [h_A - h_B], found by a sweep plus ternary
/// refinement of every local minimum; sampled grids alone can miss dips
/// between directions when an ellipse is thin.
double refined_inclusion_margin(const OperatorTuple& b, const OperatorTuple& a,
                                const ToleranceConfig& cfg) {
    auto g = [&](double th) {
        const std::vector<double> u{std::cos(th), std::sin(th)};
        return support(a, u, cfg).value - support(b, u, cfg).value;
    };
    const int grid = 1440;
    std::vector<double> vals(grid);
    for (int k = 0; k < grid; ++k) vals[k] = g(2 * M_PI * k / grid);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k) {
        const int p = (k + grid - 1) % grid, n2 = (k + 1) % grid;
        if (vals[k] > vals[p] || vals[k] > vals[n2]) continue;
        double lo = 2 * M_PI * (k - 1.0) / grid, hi = 2 * M_PI * (k + 1.0) / grid;
        for (int it = 0; it < 60; ++it) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (g(m1) <= g(m2))
                hi = m2;
            else
                lo = m1;
        }
        best = std::min(best, g(0.5 * (lo + hi)));
    }
    return best; // positive: included with that much room
}

} // namespace

TEST_CASE("criterion 1: every 2x2 pair with range inclusion dilates") {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1001);
    const ToleranceConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix a = rng.gaussian_matrix(2, 2);
        const CMatrix b0 = rng.gaussian_matrix(2, 2);
        const cplx ca = a.trace() * 0.5;
        const cplx cb = b0.trace() * 0.5;
        const OperatorTuple at = cartesian_pair(a);
        double s = 0.9;
        std::optional<OperatorTuple> bt;
        CMatrix b(2, 2);
        for (int step = 0; step < 40; ++step) {
            b = CMatrix::scaled_identity(2, ca) + s * (b0 - CMatrix::scaled_identity(2, cb));
            OperatorTuple cand = cartesian_pair(b);
            if (refined_inclusion_margin(cand, at, cfg) >= 1e-6) {
                bt = std::move(cand);
                break;
            }
            s *= 0.75;
        }
        REQUIRE(bt.has_value());
        const FeasibilityResult fr = choi_feasibility(at, *bt, cfg);
        REQUIRE(fr.status == Feasibility::Feasible);
        REQUIRE(fr.isometry.has_value());
        REQUIRE(verify_dilation(*fr.isometry, at, *bt, 1e-6));
        if (trial < 25)
            stash_cert("c1_" + std::to_string(trial) + ".json",
                       feasibility_to_json(at, *bt, fr));
    }
    const double dt = seconds_since(t0);
    REQUIRE(dt < 60.0);
    std::cout << "[PASS] criterion 1: 100/100 included 2x2 pairs dilate with verified isometries ("
              << dt << " s)\n";
}

TEST_CASE("criterion 2: simplex ranges dilate in closed form") {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2002);
    const ToleranceConfig cfg;
    int sdp_checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + trial % 3;          // m <= 3
        const int k = 2 + (trial / 3) % 3;    // k <= 4
        std::vector<HermitianMatrix> aops;
        for (int j = 0; j < m; ++j) {
            CMatrix e(m + 1, m + 1);
            e.at(j, j) = 1;
            aops.emplace_back(std::move(e), 1e-12);
        }
        const OperatorTuple a(std::move(aops));

        std::vector<CMatrix> gs;
        CMatrix total(k, k);
        for (int j = 0; j < m; ++j) {
            const CMatrix g = rng.gaussian_matrix(k, k);
            gs.push_back(g.adjoint() * g);
            total = total + gs.back();
        }
        const double cap = lambda_max(hermitian_part(total), cfg) * (1.05 + rng.uniform());
        std::vector<HermitianMatrix> bops;
        for (int j = 0; j < m; ++j) bops.emplace_back(real_part((1.0 / cap) * gs[j]), 1e-9);
        const OperatorTuple b(std::move(bops));

        const FeasibilityResult fr = simplex_dilation(a, b, cfg);
        REQUIRE(fr.status == Feasibility::Feasible);
        REQUIRE(fr.isometry.has_value());
        REQUIRE(verify_dilation(*fr.isometry, a, b, 1e-8));
        if (trial % 5 == 0) {
            const FeasibilityResult sdp = choi_feasibility(a, b, cfg);
            REQUIRE(sdp.status == Feasibility::Feasible);
            ++sdp_checked;
        }
        if (trial < 15)
            stash_cert("c2_" + std::to_string(trial) + ".json", feasibility_to_json(a, b, fr));
    }
    const double dt = seconds_since(t0);
    REQUIRE(sdp_checked == 10);
    REQUIRE(dt < 30.0);
    std::cout << "[PASS] criterion 2: 50/50 simplex dilations at residual 1e-8, SDP agrees on 10 ("
              << dt << " s)\n";
}

TEST_CASE("criterion 3: the tangent-chord hull classifies OMAX d.3 and survives probing") {
    const BlockList a = remark_blocks();
    const ToleranceConfig cfg;
    const OmaxVerdict v = classify_direct_sum(a, cfg);
    REQUIRE(v.status == OmaxStatus::OMAX);
    REQUIRE(v.rule == OmaxRule::D3);
    REQUIRE(v.tangency.has_value());
    REQUIRE(std::abs(*v.tangency - cplx(1, 0)) <= 1e-6);

    const OperatorTuple at = cartesian_pair(a.assemble());
    int feasible = 0;
    for (int k = 2; k <= 3; ++k) {
        const auto log = probe_maximality(at, 20, k, 33 + k, cfg);
        for (const auto& [b, fr] : log) {
            REQUIRE(fr.status != Feasibility::Infeasible);
            feasible += (fr.status == Feasibility::Feasible) ? 1 : 0;
        }
    }
    stash_cert("c3_verdict.json", verdict_to_json(a, v));
    std::cout << "[PASS] criterion 3: OMAX d.3 with tangency at 1; " << feasible
              << " probe dilations, no verified violation\n";
}

TEST_CASE("criterion 4: two disjoint disks are refuted with a verified witness") {
    const auto t0 = std::chrono::steady_clock::now();
    const BlockList a = case1_blocks();
    const ToleranceConfig cfg;
    const OmaxVerdict v = classify_direct_sum(a, cfg);
    REQUIRE(v.status == OmaxStatus::NotOMAX);
    REQUIRE(v.counterexample.has_value());
    REQUIRE(v.feasibility.has_value());
    REQUIRE(v.feasibility->witness.has_value());

    const OperatorTuple at = cartesian_pair(a.assemble());
    const OperatorTuple bt = cartesian_pair(*v.counterexample);
    // Margin >= 1e-8 in all 720 sampled directions.
    const InclusionReport inc = includes(bt, at, 720, cfg);
    REQUIRE(inc.worst_gap <= -1e-8);
    REQUIRE(verify_dual_witness(*v.feasibility->witness, at, bt, cfg));
    REQUIRE(witness_pairing(*v.feasibility->witness, bt) <= -1e-7);

    stash_cert("c4_verdict.json", verdict_to_json(a, v));
    stash_cert("c4_witness.json", feasibility_to_json(at, bt, *v.feasibility));
    const double dt = seconds_since(t0);
    REQUIRE(dt < 120.0);
    std::cout << "[PASS] criterion 4: NotOMAX via case 1, inclusion margin "
              << -inc.worst_gap << ", witness violation "
              << witness_pairing(*v.feasibility->witness, bt) << " (" << dt << " s)\n";
}

TEST_CASE("criterion 5: inclusion agrees with the brute-force hull oracle") {
    Rng rng(5005);
    const ToleranceConfig cfg;
    int tested = 0, skipped = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 2;
        const CMatrix a = rng.gaussian_matrix(n, n);
        CMatrix b(n, n);
        if (trial % 2 == 0) {
            // Decisively included: shrink a random matrix toward A's center.
            const cplx ca = a.trace() * (1.0 / n);
            const CMatrix b0 = rng.gaussian_matrix(n, n);
            const double s = 0.15 + 0.2 * rng.uniform();
            b = CMatrix::scaled_identity(n, ca) +
                s * (b0 - CMatrix::scaled_identity(n, b0.trace() * (1.0 / n)));
        } else {
            // Decisively excluded: inflate and translate outward.
            b = (1.2 + rng.uniform()) * a + CMatrix::scaled_identity(n, cplx(2.5, 1.5));
        }
        PlanarCloud ca_cloud = sample_cloud(a, 50000, rng);
        PlanarCloud cb_cloud = sample_cloud(b, 50000, rng);
        const double margin = brute_margin(ca_cloud, cb_cloud);
        if (std::abs(margin) <= 1e-4) {
            ++skipped;
            continue;
        }
        const bool verdict = includes(cartesian_pair(b), cartesian_pair(a), 360, cfg).included;
        REQUIRE(verdict == (margin > 0));
        ++tested;
    }
    std::cout << "[PASS] criterion 5: includes agrees with the 50k-state hull oracle on "
              << tested << " decisive instances (" << skipped << " inconclusive skipped)\n";
}

TEST_CASE("criterion 6: verdicts and feasibility are affine invariants") {
    Rng rng(6006);
    const ToleranceConfig cfg;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 2;
        const OperatorTuple a({hermitian_part(rng.random_hermitian(n)),
                               hermitian_part(rng.random_hermitian(n))});
        OperatorTuple b = a;
        if (trial % 2 == 0) {
            // Feasible with slack: a compression of A (x) I pulled toward the
            // joint range center, so the instance is strictly interior.
            const int k = 2;
            const CMatrix u = rng.random_unitary(2 * n);
            CMatrix v(2 * n, k);
            for (int i = 0; i < 2 * n; ++i)
                for (int j = 0; j < k; ++j) v.at(i, j) = u.at(i, j);
            std::vector<HermitianMatrix> ops;
            for (int l = 0; l < 2; ++l) {
                const CMatrix comp =
                    v.adjoint() * (kron(a.ops[l].mat(), CMatrix::identity(2)) * v);
                const double center = a.ops[l].mat().trace().real() / n;
                ops.emplace_back(
                    real_part(0.9 * comp + (0.1 * center) * CMatrix::identity(k)), 1e-9);
            }
            b = OperatorTuple(std::move(ops));
        } else {
            // Clearly infeasible: inflate beyond the joint range.
            std::vector<HermitianMatrix> ops;
            for (int l = 0; l < 2; ++l)
                ops.emplace_back(real_part(2.0 * a.ops[l].mat() +
                                           cplx(l ? 2.0 : -2.0, 0) * CMatrix::identity(n)),
                                 1e-9);
            b = OperatorTuple(std::move(ops));
        }

        std::vector<double> r(4), x0{rng.gaussian(), rng.gaussian()};
        double det = 0;
        while (std::abs(det) < 0.3) {
            for (auto& x : r) x = rng.gaussian();
            det = r[0] * r[3] - r[1] * r[2];
        }
        const OperatorTuple a2 = affine_apply(a, r, x0);
        const OperatorTuple b2 = affine_apply(b, r, x0);

        const bool inc1 = includes(b, a, 360, cfg).included;
        const bool inc2 = includes(b2, a2, 360, cfg).included;
        REQUIRE(inc1 == inc2);
        const Feasibility f1 = choi_feasibility(a, b, cfg).status;
        const Feasibility f2 = choi_feasibility(a2, b2, cfg).status;
        REQUIRE(f1 == f2);
        REQUIRE(f1 == (trial % 2 == 0 ? Feasibility::Feasible : Feasibility::Infeasible));
    }
    std::cout << "[PASS] criterion 6: 50/50 instances keep their inclusion verdict and "
                 "feasibility status under affine maps\n";
}

TEST_CASE("criterion 7: rank-one-normal detection is sound") {
    Rng rng(7007);
    const ToleranceConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 2;
        CMatrix g = rng.random_hermitian(n);
        g.at(0, 0) = 0;
        CMatrix a(n, n);
        a.at(0, 0) = 1;
        a = a + cplx(0, 1) * g;

        const auto r = rank_one_normal_in_span(a, 3600, cfg);
        REQUIRE(r.has_value());
        const CMatrix h =
            real_part(std::cos(r->theta) * real_part(a) + std::sin(r->theta) * imag_part(a));
        const CMatrix residual =
            h - CMatrix::scaled_identity(n, r->c) - r->s * outer(r->x, r->x);
        REQUIRE(residual.max_norm() <= 1e-7);

        const auto log = probe_maximality(cartesian_pair(a), 5, 2, 700 + trial, cfg);
        for (const auto& [b, fr] : log) REQUIRE(fr.status != Feasibility::Infeasible);
    }
    REQUIRE_FALSE(rank_one_normal_in_span(case1_blocks().assemble(), 3600, cfg).has_value());
    std::cout << "[PASS] criterion 7: 20/20 rank-one factors at residual 1e-7, probes clean, "
                 "case-1 fixture reports absent\n";
}

TEST_CASE("criterion 8: every emitted certificate re-verifies through the CLI") {
    REQUIRE_FALSE(emitted_certs().empty());
    int verified = 0;
    for (const std::string& path : emitted_certs()) {
        const int rc = std::system((cli + " verify --cert " + path + " > /dev/null").c_str());
        REQUIRE(WEXITSTATUS(rc) == 0);
        ++verified;
    }
    std::cout << "[PASS] criterion 8: " << verified
              << " certificates from criteria 1-4 re-verified by the standalone verify command\n";
}

TEST_CASE("criterion 9: ellipse round-trip and boundary agreement") {
    Rng rng(9009);
    const ToleranceConfig cfg;
    int degenerate = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double p = 0.2 + 2.5 * rng.uniform();
        double q = p * (0.1 + 0.85 * rng.uniform());
        double phi = 0.999 * M_PI * rng.uniform();
        if (trial % 10 == 0) { // ten degenerate disks
            q = 0;
            ++degenerate;
        }
        const EllipseDisk e =
            canonical_ellipse(cplx(2 * rng.gaussian(), 2 * rng.gaussian()), p, q, phi);
        const CMatrix m = matrix_of_ellipse(e);
        const EllipseDisk back = ellipse_of_2x2(m, cfg);
        REQUIRE(std::abs(back.center - e.center) <= 1e-8);
        REQUIRE(std::abs(back.p - e.p) <= 1e-8);
        REQUIRE(std::abs(back.q - e.q) <= 1e-8);
        if (e.p - e.q > 1e-8) {
            double dphi = std::fmod(std::abs(back.phi - e.phi), M_PI);
            dphi = std::min(dphi, M_PI - dphi);
            REQUIRE(dphi <= 1e-8);
        }
        const NRBoundary bd = boundary2d(m, 720, cfg);
        for (size_t k = 0; k < bd.samples.size(); ++k)
            REQUIRE(std::abs(bd.samples[k].value - ellipse_support(e, bd.thetas[k])) <= 1e-7);
    }
    REQUIRE(degenerate == 10);
    std::cout << "[PASS] criterion 9: 100 ellipse round-trips at 1e-8 (10 degenerate) and "
                 "720-angle boundary agreement at 1e-7\n";
}
