#pragma once

#include <vector>

#include "omax/hermeig.hpp"
#include "omax/rng.hpp"

namespace omax {

/// m-tuple of same-size Hermitian matrices (T_1, ..., T_m); the object whose
/// joint numerical range and dilations are studied.
struct OperatorTuple {
    int dim = 0;
    std::vector<HermitianMatrix> ops;

    OperatorTuple(std::vector<HermitianMatrix> members) : ops(std::move(members)) {
        if (ops.empty()) throw invalid_input("OperatorTuple: need at least one member");
        dim = ops.front().dim();
        for (const auto& h : ops)
            if (h.dim() != dim) throw invalid_input("OperatorTuple: members must share dimension");
    }

    int m() const { return static_cast<int>(ops.size()); }
};

/// A single (possibly non-Hermitian) matrix enters the joint theory as the
/// pair (Re A, Im A).
inline OperatorTuple cartesian_pair(const CMatrix& a, double hermitian_tol = 1e-9) {
    if (!a.is_square()) throw invalid_input("cartesian_pair: matrix must be square");
    return OperatorTuple({HermitianMatrix(real_part(a), hermitian_tol),
                          HermitianMatrix(imag_part(a), hermitian_tol)});
}

/// Affine image: j-th output member is sum_i r_ij T_i + x_j I (row-vector
/// convention x -> xR + x0 lifted to tuples). R is m x m row-major.
inline OperatorTuple affine_apply(const OperatorTuple& t, const std::vector<double>& r,
                                  const std::vector<double>& x0) {
    const int m = t.m();
    if (static_cast<int>(r.size()) != m * m || static_cast<int>(x0.size()) != m)
        throw invalid_input("affine_apply: R must be m x m and x0 length m");
    std::vector<HermitianMatrix> out;
    out.reserve(m);
    for (int j = 0; j < m; ++j) {
        CMatrix s = CMatrix::scaled_identity(t.dim, x0[j]);
        for (int i = 0; i < m; ++i) s = s + r[static_cast<size_t>(i) * m + j] * t.ops[i].mat();
        out.emplace_back(0.5 * (s + s.adjoint()), 1e-9);
    }
    return OperatorTuple(std::move(out));
}

/// Joint expectation vector (<T_1 x, x>, ..., <T_m x, x>).
inline std::vector<double> joint_point(const OperatorTuple& t, const std::vector<cplx>& x) {
    std::vector<double> p(t.m());
    for (int j = 0; j < t.m(); ++j) p[j] = expectation(t.ops[j].mat(), x);
    return p;
}

/// Joint expectations at Haar-random unit vectors; deterministic given seed.
inline std::vector<std::vector<double>> joint_sample(const OperatorTuple& t, int trials,
                                                     std::uint64_t seed) {
    if (trials < 1) throw invalid_input("joint_sample: trials must be >= 1");
    Rng rng(seed);
    std::vector<std::vector<double>> pts;
    pts.reserve(trials);
    for (int k = 0; k < trials; ++k) pts.push_back(joint_point(t, rng.unit_vector(t.dim)));
    return pts;
}

} // namespace omax
