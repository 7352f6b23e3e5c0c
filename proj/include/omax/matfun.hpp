#pragma once

#include <cmath>
#include <vector>

#include "omax/hermeig.hpp"

namespace omax {

/// Hermitian PSD square root. Eigenvalues in [-psd_tol, 0) are clamped to 0;
/// anything lower is rejected.
inline CMatrix psd_sqrt(const HermitianMatrix& c, const ToleranceConfig& cfg = {}) {
    const EigDecomposition eig = herm_eig(c, cfg);
    if (eig.values.front() < -cfg.psd_tol)
        throw not_psd_error("psd_sqrt: eigenvalue " + std::to_string(eig.values.front()) +
                            " below -psd_tol");
    const int n = c.dim();
    CMatrix s(n, n);
    for (int k = 0; k < n; ++k) {
        const double r = std::sqrt(std::max(eig.values[k], 0.0));
        if (r == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s.at(i, j) += r * eig.vectors.at(i, k) * std::conj(eig.vectors.at(j, k));
    }
    return s;
}

/// Moore-Penrose pseudoinverse through the Hermitian dilation
/// [[0, M], [M*, 0]], whose spectrum is {+sigma, -sigma, 0}; an eigenvector
/// (u; v) at sigma > 0 carries a singular pair Mv = sigma u. Singular values
/// below eig_tol * sigma_max are treated as zero.
inline CMatrix pinv(const CMatrix& m, const ToleranceConfig& cfg = {}) {
    const int r = m.rows(), c = m.cols();
    CMatrix w(r + c, r + c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            w.at(i, r + j) = m.at(i, j);
            w.at(r + j, i) = std::conj(m.at(i, j));
        }
    const EigDecomposition eig = herm_eig(HermitianMatrix(w, 1e-12), cfg);
    const double smax = std::max(eig.values.back(), -eig.values.front());
    const double cut = std::max(smax * cfg.eig_tol, 0.0);
    CMatrix p(c, r);
    for (int k = 0; k < r + c; ++k) {
        const double s = eig.values[k];
        if (s <= cut) continue;
        // pinv += (1/sigma) * (sqrt2 v)(sqrt2 u)* summed over the positive part.
        for (int i = 0; i < c; ++i)
            for (int j = 0; j < r; ++j)
                p.at(i, j) += (2.0 / s) * eig.vectors.at(r + i, k) * std::conj(eig.vectors.at(j, k));
    }
    return p;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cplx aij = a.at(i, j);
            if (aij == cplx(0, 0)) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    m.at(i * b.rows() + k, j * b.cols() + l) = aij * b.at(k, l);
        }
    return m;
}

inline CMatrix direct_sum(const std::vector<CMatrix>& blocks) {
    if (blocks.empty()) throw invalid_input("direct_sum: empty block list");
    int r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    CMatrix m(r, c);
    int i0 = 0, j0 = 0;
    for (const auto& b : blocks) {
        m.set_block(i0, j0, b);
        i0 += b.rows();
        j0 += b.cols();
    }
    return m;
}

} // namespace omax
