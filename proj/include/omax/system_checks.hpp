#pragma once

#include <vector>

#include "omax/tuple.hpp"

namespace omax {

/// Certificate check for the spanning-set criterion: with the supplied
/// unitary U, every U*S_iU must be a real combination of
/// {E_jj} u {E_{2j-1,2j} + E_{2j,2j-1}}, and the span of the conjugated set
/// must equal the span of a subset of those canonical elements, which holds
/// exactly when its dimension matches the number of touched coordinates.
inline bool spanning_set_omax_check(const std::vector<HermitianMatrix>& s, const CMatrix& u,
                                    const ToleranceConfig& cfg = {}) {
    if (s.empty()) throw invalid_input("spanning_set_omax_check: empty set");
    const int n = s.front().dim();
    if (!u.is_square() || u.rows() != n)
        throw invalid_input("spanning_set_omax_check: U must match the matrix size");
    if ((u.adjoint() * u - CMatrix::identity(n)).max_norm() > 1e-10)
        throw invalid_input("spanning_set_omax_check: U is not unitary");
    for (const auto& m : s)
        if (m.dim() != n) throw invalid_input("spanning_set_omax_check: size mismatch");

    const int pairs = n / 2;
    const int coords = n + pairs; // E_jj coordinates then pair coordinates
    const double tol = 1e-9;

    std::vector<std::vector<double>> rows;
    for (const auto& m : s) {
        const CMatrix c = u.adjoint() * (m.mat() * u);
        std::vector<double> coeff(coords, 0.0);
        for (int j = 0; j < n; ++j) {
            if (std::abs(c.at(j, j).imag()) > tol) return false;
            coeff[j] = c.at(j, j).real();
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const cplx z = c.at(i, j);
                const bool canonical_pair = (i % 2 == 0) && (j == i + 1);
                if (!canonical_pair) {
                    if (std::abs(z) > tol) return false;
                    continue;
                }
                if (std::abs(z.imag()) > tol) return false;
                coeff[n + i / 2] = z.real();
            }
        rows.push_back(std::move(coeff));
    }

    // Rank of the coefficient matrix versus the number of active coordinates.
    std::vector<bool> active(coords, false);
    for (const auto& r : rows)
        for (int c = 0; c < coords; ++c)
            if (std::abs(r[c]) > tol) active[c] = true;
    int active_count = 0;
    for (bool b : active) active_count += b ? 1 : 0;

    std::vector<std::vector<double>> work = rows;
    int rank = 0;
    for (int col = 0; col < coords && rank < static_cast<int>(work.size()); ++col) {
        int pivot = -1;
        double best = tol;
        for (int r = rank; r < static_cast<int>(work.size()); ++r)
            if (std::abs(work[r][col]) > best) {
                best = std::abs(work[r][col]);
                pivot = r;
            }
        if (pivot < 0) continue;
        std::swap(work[rank], work[pivot]);
        for (int r = 0; r < static_cast<int>(work.size()); ++r) {
            if (r == rank) continue;
            const double f = work[r][col] / work[rank][col];
            if (f == 0) continue;
            for (int c2 = 0; c2 < coords; ++c2) work[r][c2] -= f * work[rank][c2];
        }
        ++rank;
    }
    (void)cfg;
    return rank == active_count;
}

/// Certificate check that (R, x0) carries the tuple onto the canonical
/// ice-cream-cone triple (E11 - E22, i E12 - i E21, E33) in M_3, up to the
/// supplied (or identity) unitary conjugation.
inline bool ice_cream_cone_check(const OperatorTuple& t, const std::vector<double>& r,
                                 const std::vector<double>& x0,
                                 const CMatrix* u_opt = nullptr,
                                 const ToleranceConfig& cfg = {}) {
    if (t.m() != 3 || t.dim != 3)
        throw invalid_input("ice_cream_cone_check: need a triple of 3x3 Hermitians");
    if (r.size() != 9 || x0.size() != 3)
        throw invalid_input("ice_cream_cone_check: R must be 3x3 and x0 length 3");
    const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                       r[2] * (r[3] * r[7] - r[4] * r[6]);
    if (std::abs(det) < 1e-12) throw invalid_input("ice_cream_cone_check: R is singular");

    CMatrix u = u_opt ? *u_opt : CMatrix::identity(3);
    if ((u.adjoint() * u - CMatrix::identity(3)).max_norm() > 1e-10)
        throw invalid_input("ice_cream_cone_check: U is not unitary");

    const OperatorTuple mapped = affine_apply(t, r, x0);

    CMatrix k1(3, 3), k2(3, 3), k3(3, 3);
    k1.at(0, 0) = 1;
    k1.at(1, 1) = -1;
    k2.at(0, 1) = cplx(0, 1);
    k2.at(1, 0) = cplx(0, -1);
    k3.at(2, 2) = 1;
    const CMatrix canon[3] = {k1, k2, k3};
    for (int j = 0; j < 3; ++j) {
        const CMatrix got = u.adjoint() * (mapped.ops[j].mat() * u);
        if ((got - canon[j]).max_norm() > 1e-9) return false;
    }
    (void)cfg;
    return true;
}

} // namespace omax
