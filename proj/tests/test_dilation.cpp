#include <catch2/catch_amalgamated.hpp>

#include "omax/choi_solver.hpp"
#include "omax/ellipse.hpp"
#include "omax/simplex.hpp"

using namespace omax;

namespace {

const CMatrix shift2 = CMatrix::from_rows({{0, 2}, {0, 0}});

OperatorTuple case1_tuple() {
    // Two disjoint unit disks: centers 0 and 3.
    return cartesian_pair(direct_sum({shift2, CMatrix::scaled_identity(2, 3) + shift2}));
}

OperatorTuple thin_bridge_tuple() {
    // Thin ellipse joining the exposed points -1 and 4 of the two disks.
    return cartesian_pair(matrix_of_ellipse(canonical_ellipse(cplx(1.5, 0), 2.5, 0.1, 0)));
}

ChoiMatrix identity_choi(int n) {
    CMatrix c(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CMatrix eij(n, n);
            eij.at(i, j) = 1;
            c.set_block(i * n, j * n, eij);
        }
    return ChoiMatrix(n, n, HermitianMatrix(c, 1e-12));
}

DilationIsometry random_compression(Rng& rng, const OperatorTuple& a, int k, int r,
                                    OperatorTuple* b_out) {
    const int n = a.dim;
    const CMatrix u = rng.random_unitary(n * r);
    CMatrix v(n * r, k);
    for (int i = 0; i < n * r; ++i)
        for (int j = 0; j < k; ++j) v.at(i, j) = u.at(i, j);
    std::vector<HermitianMatrix> ops;
    const CMatrix ir = CMatrix::identity(r);
    for (int l = 0; l < a.m(); ++l)
        ops.emplace_back(real_part(v.adjoint() * (kron(a.ops[l].mat(), ir) * v)), 1e-9);
    *b_out = OperatorTuple(std::move(ops));
    return DilationIsometry(n, k, r, std::move(v));
}

} // namespace

TEST_CASE("verify_dilation basics") {
    const OperatorTuple a = cartesian_pair(shift2);
    SECTION("identity isometry, A = B, r = 1") {
        const DilationIsometry v(2, 2, 1, CMatrix::identity(2));
        CHECK(verify_dilation(v, a, a, 1e-10));
    }
    SECTION("random compressions verify by construction, perturbations fail") {
        Rng rng(5);
        for (int trial = 0; trial < 5; ++trial) {
            OperatorTuple b = a;
            const DilationIsometry v = random_compression(rng, a, 2, 2, &b);
            CHECK(verify_dilation(v, a, b, 1e-8));
            DilationIsometry bad = v;
            bad.v.at(0, 0) += 1e-3;
            CHECK_FALSE(verify_dilation(bad, a, b, 1e-6));
        }
    }
}

TEST_CASE("verify_dual_witness basics") {
    const OperatorTuple a = case1_tuple();
    const OperatorTuple b = thin_bridge_tuple();
    SECTION("the trivial positive tuple is not a witness") {
        DualWitness w;
        w.k = 2;
        w.z.emplace_back(CMatrix::identity(2));
        w.z.emplace_back(CMatrix(2, 2), 1e-12);
        w.z.emplace_back(CMatrix(2, 2), 1e-12);
        CHECK_FALSE(verify_dual_witness(w, a, b)); // trace condition fails
    }
    SECTION("size mismatch is rejected") {
        DualWitness w;
        w.k = 2;
        w.z.emplace_back(CMatrix::identity(2));
        CHECK_THROWS_AS(verify_dual_witness(w, a, b), invalid_input);
    }
}

TEST_CASE("choi_feasibility finds the identity map") {
    const OperatorTuple a = cartesian_pair(shift2);
    // The explicit Choi matrix of the identity map certifies A = B...
    const ChoiMatrix c = identity_choi(2);
    const ChoiCheck chk = check_choi(c, a, a);
    CHECK(chk.lambda_min >= -1e-12);
    CHECK(chk.unitality <= 1e-12);
    CHECK(chk.moments <= 1e-12);
    const DilationIsometry iso = extract_isometry(c, a, a);
    CHECK(verify_dilation(iso, a, a, 1e-8));
    // ...and the solver independently reaches Feasible.
    const FeasibilityResult fr = choi_feasibility(a, a);
    REQUIRE(fr.status == Feasibility::Feasible);
    REQUIRE(fr.isometry.has_value());
    CHECK(verify_dilation(*fr.isometry, a, a, 1e-6));
}

TEST_CASE("disk-in-disk dilates") {
    const OperatorTuple a = cartesian_pair(shift2);
    const OperatorTuple b = cartesian_pair(CMatrix::from_rows({{0, 1}, {0, 0}}));
    const FeasibilityResult fr = choi_feasibility(a, b);
    REQUIRE(fr.status == Feasibility::Feasible);
    REQUIRE(fr.choi.has_value());
    REQUIRE(fr.isometry.has_value());
    CHECK(verify_dilation(*fr.isometry, a, b, 1e-6));
}

TEST_CASE("thin bridge across two disks is infeasible with a verified witness") {
    const OperatorTuple a = case1_tuple();
    const OperatorTuple b = thin_bridge_tuple();
    REQUIRE(includes(b, a, 720).included);
    const FeasibilityResult fr = choi_feasibility(a, b);
    REQUIRE(fr.status == Feasibility::Infeasible);
    REQUIRE(fr.witness.has_value());
    CHECK(verify_dual_witness(*fr.witness, a, b));
    CHECK_FALSE(fr.isometry.has_value());

    SECTION("flipping the witness sign breaks positivity") {
        DualWitness flipped = *fr.witness;
        flipped.z[0] = HermitianMatrix(-1.0 * flipped.z[0].mat(), 1e-9);
        CHECK_FALSE(verify_dual_witness(flipped, a, b));
    }
}

TEST_CASE("choi round-trip: compressions are recognized feasible") {
    Rng rng(77);
    for (int n = 2; n <= 4; ++n)
        for (int k = 2; k <= 4; ++k) {
            const OperatorTuple a({hermitian_part(rng.random_hermitian(n)),
                                   hermitian_part(rng.random_hermitian(n))});
            OperatorTuple b = a;
            (void)random_compression(rng, a, k, 2, &b);
            const FeasibilityResult fr = choi_feasibility(a, b);
            REQUIRE(fr.status == Feasibility::Feasible);
            CHECK(verify_dilation(*fr.isometry, a, b, 1e-6));
        }
}

TEST_CASE("simplex_vertices fixtures") {
    SECTION("coordinate projections in M3") {
        CMatrix e11(3, 3), e22(3, 3);
        e11.at(0, 0) = 1;
        e22.at(1, 1) = 1;
        const OperatorTuple t({HermitianMatrix(e11), HermitianMatrix(e22)});
        const auto verts = simplex_vertices(t);
        REQUIRE(verts.has_value());
        REQUIRE(verts->size() == 3);
        std::vector<std::vector<double>> expected{{0, 0}, {1, 0}, {0, 1}};
        for (const auto& want : expected) {
            bool found = false;
            for (const auto& v : *verts)
                if (std::abs(v.point[0] - want[0]) < 1e-8 && std::abs(v.point[1] - want[1]) < 1e-8)
                    found = true;
            CHECK(found);
        }
    }
    SECTION("m = 1 segment") {
        const auto verts = simplex_vertices(OperatorTuple({HermitianMatrix(CMatrix::diag({0, 1}))}));
        REQUIRE(verts.has_value());
        REQUIRE(verts->size() == 2);
    }
    SECTION("a disk is not a simplex") {
        CHECK_FALSE(simplex_vertices(cartesian_pair(shift2)).has_value());
    }
}

TEST_CASE("simplex_dilation fixtures") {
    SECTION("m = 1: spectrum inside the segment") {
        const OperatorTuple a({HermitianMatrix(CMatrix::diag({0, 1}))});
        const OperatorTuple b({HermitianMatrix(CMatrix::from_rows({{0.5, 0.25}, {0.25, 0.5}}))});
        const FeasibilityResult fr = simplex_dilation(a, b);
        REQUIRE(fr.status == Feasibility::Feasible);
        CHECK(verify_dilation(*fr.isometry, a, b, 1e-8));
    }
    SECTION("scalar tuple strictly inside") {
        CMatrix e11(3, 3), e22(3, 3);
        e11.at(0, 0) = 1;
        e22.at(1, 1) = 1;
        const OperatorTuple a({HermitianMatrix(e11), HermitianMatrix(e22)});
        const OperatorTuple b({HermitianMatrix(CMatrix::scaled_identity(3, 0.25)),
                               HermitianMatrix(CMatrix::scaled_identity(3, 0.25))});
        const FeasibilityResult fr = simplex_dilation(a, b);
        REQUIRE(fr.status == Feasibility::Feasible);
        CHECK(verify_dilation(*fr.isometry, a, b, 1e-8));
    }
    SECTION("m = 2 with random PSD members") {
        CMatrix e11(3, 3), e22(3, 3);
        e11.at(0, 0) = 1;
        e22.at(1, 1) = 1;
        const OperatorTuple a({HermitianMatrix(e11), HermitianMatrix(e22)});
        Rng rng(13);
        const CMatrix g1 = rng.gaussian_matrix(3, 3), g2 = rng.gaussian_matrix(3, 3);
        CMatrix b1 = g1.adjoint() * g1, b2 = g2.adjoint() * g2;
        const double s = lambda_max(hermitian_part(b1 + b2)) * 1.05;
        b1 = (1.0 / s) * b1;
        b2 = (1.0 / s) * b2;
        const OperatorTuple b({hermitian_part(b1), hermitian_part(b2)});
        const FeasibilityResult fr = simplex_dilation(a, b);
        REQUIRE(fr.status == Feasibility::Feasible);
        CHECK(verify_dilation(*fr.isometry, a, b, 1e-8));
        // The general SDP agrees.
        const FeasibilityResult sdp = choi_feasibility(a, b);
        CHECK(sdp.status == Feasibility::Feasible);
    }
    SECTION("non-simplex range is rejected") {
        const OperatorTuple a = cartesian_pair(shift2);
        CHECK_THROWS_AS(simplex_dilation(a, a), invalid_input);
    }
}

TEST_CASE("feasibility status is invariant under simultaneous affine maps") {
    Rng rng(55);
    const ToleranceConfig cfg;
    for (int trial = 0; trial < 2; ++trial) {
        const OperatorTuple a = (trial == 0) ? cartesian_pair(shift2) : case1_tuple();
        const OperatorTuple b = (trial == 0) ? cartesian_pair(CMatrix::from_rows({{0, 1}, {0, 0}}))
                                             : thin_bridge_tuple();
        std::vector<double> r(4), x0{rng.gaussian(), rng.gaussian()};
        double det = 0;
        while (std::abs(det) < 0.4) {
            for (auto& x : r) x = rng.gaussian();
            det = r[0] * r[3] - r[1] * r[2];
        }
        const Feasibility before = choi_feasibility(a, b, cfg).status;
        const Feasibility after =
            choi_feasibility(affine_apply(a, r, x0), affine_apply(b, r, x0), cfg).status;
        CHECK(before == after);
    }
}

TEST_CASE("probe_maximality on known-maximal systems finds nothing") {
    const ToleranceConfig cfg;
    SECTION("single 2x2") {
        const auto log = probe_maximality(cartesian_pair(shift2), 8, 2, 42, cfg);
        for (const auto& [b, fr] : log) CHECK(fr.status != Feasibility::Infeasible);
    }
    SECTION("simplex tuple") {
        CMatrix e11(3, 3), e22(3, 3);
        e11.at(0, 0) = 1;
        e22.at(1, 1) = 1;
        const OperatorTuple a({HermitianMatrix(e11), HermitianMatrix(e22)});
        const auto log = probe_maximality(a, 6, 2, 43, cfg);
        for (const auto& [b, fr] : log) CHECK(fr.status != Feasibility::Infeasible);
    }
}

TEST_CASE("probe preconditions") {
    CHECK_THROWS_AS(probe_maximality(cartesian_pair(shift2), 0, 2, 1), invalid_input);
    CHECK_THROWS_AS(probe_maximality(cartesian_pair(shift2), 1, 1, 1), invalid_input);
}
