#include <catch2/catch_amalgamated.hpp>

#include "omax/boundary.hpp"
#include "omax/matfun.hpp"
#include "omax/support.hpp"
#include "omax/tuple.hpp"

using namespace omax;

namespace {

const CMatrix shift2 = CMatrix::from_rows({{0, 2}, {0, 0}}); // W = unit disk

OperatorTuple single(const CMatrix& h) { return OperatorTuple({HermitianMatrix(h, 1e-9)}); }

} // namespace

TEST_CASE("support on diagonal fixtures") {
    const OperatorTuple t = single(CMatrix::diag({0, 1}));
    const SupportSample up = support(t, {1.0});
    CHECK(up.value == Catch::Approx(1));
    CHECK(up.point[0] == Catch::Approx(1));

    const SupportSample dn = support(t, {-1.0});
    CHECK(dn.value == Catch::Approx(0).margin(1e-12));
    CHECK(dn.point[0] == Catch::Approx(0).margin(1e-12));
}

TEST_CASE("support of the Cartesian pair of a nilpotent 2x2") {
    const OperatorTuple t = cartesian_pair(shift2);
    const SupportSample s = support(t, {1.0, 0.0});
    CHECK(s.value == Catch::Approx(1)); // lambda_max of [[0,1],[1,0]]
    CHECK(std::abs(vec_norm(s.maximizer) - 1) <= 1e-10);
    CHECK(std::abs(dot(s.direction, s.point) - s.value) <= 1e-8);
}

TEST_CASE("support rejects the zero direction") {
    CHECK_THROWS_AS(support(single(CMatrix::identity(2)), {0.0}), invalid_input);
}

TEST_CASE("boundary2d fixtures") {
    SECTION("1x1 singleton") {
        const NRBoundary b = boundary2d(CMatrix::from_rows({{3}}), 90);
        for (const auto& s : b.samples) {
            CHECK(s.point[0] == Catch::Approx(3));
            CHECK(s.point[1] == Catch::Approx(0).margin(1e-12));
        }
    }
    SECTION("Hermitian matrix traces its spectrum segment") {
        const NRBoundary b = boundary2d(CMatrix::diag({0, 1}), 180);
        for (const auto& s : b.samples) {
            CHECK(s.point[0] >= -1e-10);
            CHECK(s.point[0] <= 1 + 1e-10);
            CHECK(std::abs(s.point[1]) <= 1e-10);
        }
    }
    SECTION("nilpotent 2x2 traces the unit circle") {
        const NRBoundary b = boundary2d(shift2, 360);
        for (const auto& s : b.samples) {
            const double r = std::hypot(s.point[0], s.point[1]);
            CHECK(std::abs(r - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("boundary2d points lie in all sampled half-planes") {
    Rng rng(3);
    const CMatrix a = rng.gaussian_matrix(4, 4);
    const NRBoundary b = boundary2d(a, 240);
    const ToleranceConfig cfg;
    for (const auto& s : b.samples)
        for (size_t k = 0; k < b.samples.size(); ++k) {
            const auto& u = b.samples[k].direction;
            CHECK(u[0] * s.point[0] + u[1] * s.point[1] <=
                  b.samples[k].value + cfg.support_gap_tol);
        }
}

TEST_CASE("includes on disk fixtures") {
    const OperatorTuple big = cartesian_pair(shift2);
    SECTION("reflexive") {
        const InclusionReport rep = includes(big, big, 360);
        CHECK(rep.included);
        CHECK(rep.worst_gap <= 1e-12);
    }
    SECTION("half disk inside") {
        const InclusionReport rep = includes(cartesian_pair(CMatrix::from_rows({{0, 1}, {0, 0}})),
                                             big, 360);
        CHECK(rep.included);
        CHECK(rep.worst_gap == Catch::Approx(-0.5).margin(1e-9));
    }
    SECTION("bigger disk not included") {
        const InclusionReport rep = includes(cartesian_pair(CMatrix::from_rows({{0, 3}, {0, 0}})),
                                             big, 360);
        CHECK_FALSE(rep.included);
        CHECK(rep.worst_gap == Catch::Approx(0.5).margin(1e-9));
    }
    SECTION("length mismatch") {
        CHECK_THROWS_AS(includes(single(CMatrix::identity(2)), big, 90), invalid_input);
    }
}

TEST_CASE("joint_sample fixtures") {
    SECTION("identity gives the constant point") {
        for (const auto& p : joint_sample(single(CMatrix::identity(3)), 25, 7))
            CHECK(p[0] == Catch::Approx(1));
    }
    SECTION("diag(0,1) stays inside [0,1]") {
        for (const auto& p : joint_sample(single(CMatrix::diag({0, 1})), 50, 7)) {
            CHECK(p[0] >= -1e-12);
            CHECK(p[0] <= 1 + 1e-12);
        }
    }
    SECTION("Pauli pair fills the unit disk") {
        const OperatorTuple t({HermitianMatrix(CMatrix::diag({1, -1})),
                               HermitianMatrix(CMatrix::from_rows({{0, cplx(0, 1)}, {cplx(0, -1), 0}}))});
        for (const auto& p : joint_sample(t, 200, 13))
            CHECK(p[0] * p[0] + p[1] * p[1] <= 1 + 1e-10);
    }
    SECTION("deterministic given seed") {
        const auto a = joint_sample(single(CMatrix::diag({0, 1})), 5, 99);
        const auto b = joint_sample(single(CMatrix::diag({0, 1})), 5, 99);
        CHECK(a == b);
    }
}

TEST_CASE("affine_apply fixtures") {
    const OperatorTuple t = single(CMatrix::diag({0, 1}));
    SECTION("identity map") {
        const OperatorTuple out = affine_apply(t, {1.0}, {0.0});
        CHECK((out.ops[0].mat() - t.ops[0].mat()).max_norm() <= 1e-14);
    }
    SECTION("scale and shift") {
        const OperatorTuple out = affine_apply(t, {2.0}, {3.0});
        CHECK((out.ops[0].mat() - CMatrix::diag({3, 5})).max_norm() <= 1e-12);
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(affine_apply(t, {1.0, 0.0}, {0.0}), invalid_input);
    }
}

TEST_CASE("inclusion verdict is invariant under simultaneous affine maps") {
    Rng rng(17);
    const ToleranceConfig cfg;
    for (int trial = 0; trial < 8; ++trial) {
        const OperatorTuple a = cartesian_pair(rng.gaussian_matrix(3, 3));
        const OperatorTuple b = cartesian_pair(rng.gaussian_matrix(2, 2));
        std::vector<double> r(4), x0{rng.gaussian(), rng.gaussian()};
        double det = 0;
        while (std::abs(det) < 0.3) {
            for (auto& x : r) x = rng.gaussian();
            det = r[0] * r[3] - r[1] * r[2];
        }
        const bool before = includes(b, a, 240, cfg).included;
        const bool after = includes(affine_apply(b, r, x0), affine_apply(a, r, x0), 240, cfg).included;
        CHECK(before == after);
    }
}

TEST_CASE("support function is subadditive in the direction argument") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const OperatorTuple t = cartesian_pair(rng.gaussian_matrix(4, 4));
        std::vector<double> u{rng.gaussian(), rng.gaussian()}, v{rng.gaussian(), rng.gaussian()};
        std::vector<double> w{u[0] + v[0], u[1] + v[1]};
        if (norm2(u) < 1e-6 || norm2(v) < 1e-6 || norm2(w) < 1e-6) continue;
        // Un-normalized support: lambda_max of the direction matrix.
        auto raw = [&](const std::vector<double>& d) {
            return lambda_max(hermitian_part(direction_matrix(t, d)));
        };
        CHECK(raw(w) <= raw(u) + raw(v) + 1e-9);
    }
}

TEST_CASE("sampled joint points satisfy the support description") {
    Rng rng(31);
    const OperatorTuple t = cartesian_pair(rng.gaussian_matrix(4, 4));
    const auto pts = joint_sample(t, 50, 5);
    const auto dirs = sphere_directions(2, 100);
    for (const auto& u : dirs) {
        const double h = support(t, u).value;
        for (const auto& p : pts) CHECK(dot(u, p) <= h + 1e-9);
    }
}

TEST_CASE("midpoints of joint samples stay within the support description") {
    // dim span{I, T1, T2} <= 3 and n >= 3: the joint range is convex.
    Rng rng(37);
    const CMatrix h1 = rng.random_hermitian(3);
    const CMatrix h2 = rng.random_hermitian(3);
    const OperatorTuple t({hermitian_part(h1), hermitian_part(h2)});
    const auto pts = joint_sample(t, 60, 11);
    Rng pick(12);
    for (int k = 0; k < 40; ++k) {
        const auto& p = pts[static_cast<size_t>(pick.uniform() * pts.size())];
        const auto& q = pts[static_cast<size_t>(pick.uniform() * pts.size())];
        const std::vector<double> mid{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
        for (const auto& u : sphere_directions(2, 64))
            CHECK(dot(u, mid) <= support(t, u).value + 1e-6);
    }
}

TEST_CASE("flat_portions fixtures") {
    SECTION("disk has no flat portion") {
        CHECK(flat_portions(shift2, 720).empty());
    }
    SECTION("normal 3x3 gives the triangle edges") {
        const auto flats = flat_portions(CMatrix::diag({0, 1, cplx(0, 1)}), 720);
        REQUIRE(flats.size() == 3);
    }
    SECTION("Remark-style hull: vertical segment plus two tangents") {
        const CMatrix a = direct_sum({CMatrix::diag({cplx(1, 1), cplx(1, -1)}), shift2});
        const auto flats = flat_portions(a, 720);
        REQUIRE(flats.size() == 3);
        bool seen_vertical = false, seen_upper = false, seen_lower = false;
        for (const auto& f : flats) {
            auto close = [](cplx x, cplx y) { return std::abs(x - y) <= 1e-6; };
            if ((close(f.a, cplx(1, -1)) && close(f.b, cplx(1, 1))) ||
                (close(f.a, cplx(1, 1)) && close(f.b, cplx(1, -1))))
                seen_vertical = true;
            else if (close(f.a, cplx(0, 1)) || close(f.b, cplx(0, 1)))
                seen_upper = close(f.a, cplx(1, 1)) || close(f.b, cplx(1, 1));
            else if (close(f.a, cplx(0, -1)) || close(f.b, cplx(0, -1)))
                seen_lower = close(f.a, cplx(1, -1)) || close(f.b, cplx(1, -1));
        }
        CHECK(seen_vertical);
        CHECK(seen_upper);
        CHECK(seen_lower);
    }
}
