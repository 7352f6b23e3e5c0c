#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "omax/cmatrix.hpp"
#include "omax/tolerances.hpp"

namespace omax {

/// Square matrix certified Hermitian at construction time.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(CMatrix base, double hermitian_tol = 1e-12) : base_(std::move(base)) {
        if (!base_.is_square()) throw invalid_input("HermitianMatrix: matrix must be square");
        if (!base_.all_finite()) throw invalid_input("HermitianMatrix: entries must be finite");
        if ((base_ - base_.adjoint()).max_norm() > hermitian_tol)
            throw invalid_input("HermitianMatrix: deviation from self-adjointness exceeds tolerance");
    }

    int dim() const { return base_.rows(); }
    const CMatrix& mat() const { return base_; }

  private:
    CMatrix base_;
};

/// Symmetrize and wrap; for matrices that are Hermitian up to roundoff.
inline HermitianMatrix hermitian_part(const CMatrix& a, double tol = 1e-12) {
    return HermitianMatrix(0.5 * (a + a.adjoint()), tol);
}

inline CMatrix real_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }
inline CMatrix imag_part(const CMatrix& a) { return cplx(0, -0.5) * (a - a.adjoint()); }

struct EigDecomposition {
    std::vector<double> values; // ascending
    CMatrix vectors;            // unitary, columns are eigenvectors
};

/// Hermitian eigendecomposition by cyclic Jacobi. Each rotation solves the
/// 2x2 Hermitian subproblem in closed form and annihilates one off-diagonal
/// entry; sweeps repeat until the off-diagonal Frobenius mass falls below
/// eig_tol * ||H||_F. Converges unconditionally on Hermitian input.
inline EigDecomposition herm_eig(const HermitianMatrix& h, const ToleranceConfig& cfg = {}) {
    const int n = h.dim();
    CMatrix a = 0.5 * (h.mat() + h.mat().adjoint());
    CMatrix v = CMatrix::identity(n);

    const double scale = a.frob_norm();
    if (scale > 0 && n > 1) {
        const double target = cfg.eig_tol * scale;
        const double tiny = target / (10.0 * n);
        for (int sweep = 0; sweep < 100; ++sweep) {
            double off = 0;
            for (int p = 0; p < n; ++p)
                for (int q = p + 1; q < n; ++q) off += 2.0 * std::norm(a.at(p, q));
            if (std::sqrt(off) <= target) break;

            for (int p = 0; p < n; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const cplx apq = a.at(p, q);
                    const double beta = std::abs(apq);
                    if (beta <= tiny) continue;
                    const double app = a.at(p, p).real();
                    const double aqq = a.at(q, q).real();
                    // Phase-reduce to a real 2x2 and rotate by the smaller
                    // Jacobi angle (Rutishauser form; stable for tiny pivots).
                    const cplx phase = apq / beta;
                    const double tau = (app - aqq) / (2.0 * beta);
                    const double t =
                        (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double cr = 1.0 / std::sqrt(1.0 + t * t);
                    const double sr = t * cr;
                    const cplx cp = phase * cr;  // U = [[phase*cr, -phase*sr], [sr, cr]]
                    const cplx sp = phase * sr;

                    // A <- U* A U and V <- V U on the (p, q) plane.
                    for (int k = 0; k < n; ++k) {
                        const cplx akp = a.at(k, p), akq = a.at(k, q);
                        a.at(k, p) = akp * cp + akq * sr;
                        a.at(k, q) = -akp * sp + akq * cr;
                    }
                    for (int k = 0; k < n; ++k) {
                        const cplx apk = a.at(p, k), aqk = a.at(q, k);
                        a.at(p, k) = std::conj(cp) * apk + sr * aqk;
                        a.at(q, k) = -std::conj(sp) * apk + cr * aqk;
                    }
                    for (int k = 0; k < n; ++k) {
                        const cplx vkp = v.at(k, p), vkq = v.at(k, q);
                        v.at(k, p) = vkp * cp + vkq * sr;
                        v.at(k, q) = -vkp * sp + vkq * cr;
                    }
                    a.at(p, q) = 0;
                    a.at(q, p) = 0;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

    EigDecomposition eig;
    eig.values.resize(n);
    eig.vectors = CMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        eig.values[j] = a.at(src, src).real();
        // Deterministic phase: largest-magnitude component made real positive.
        int kmax = 0;
        double amax = 0;
        for (int k = 0; k < n; ++k) {
            const double m = std::abs(v.at(k, src));
            if (m > amax) {
                amax = m;
                kmax = k;
            }
        }
        cplx phase(1, 0);
        if (amax > 0) phase = std::conj(v.at(kmax, src)) / amax;
        for (int k = 0; k < n; ++k) eig.vectors.at(k, j) = v.at(k, src) * phase;
    }
    return eig;
}

inline double lambda_min(const HermitianMatrix& h, const ToleranceConfig& cfg = {}) {
    return herm_eig(h, cfg).values.front();
}

inline double lambda_max(const HermitianMatrix& h, const ToleranceConfig& cfg = {}) {
    return herm_eig(h, cfg).values.back();
}

inline std::vector<cplx> eig_column(const EigDecomposition& eig, int j) {
    std::vector<cplx> x(eig.vectors.rows());
    for (int k = 0; k < eig.vectors.rows(); ++k) x[k] = eig.vectors.at(k, j);
    return x;
}

/// Size of the eigenvalue cluster at the top of the spectrum, at width
/// degeneracy_tol * max(1, spectral radius).
inline int top_cluster_size(const std::vector<double>& ascending, double degeneracy_tol) {
    if (ascending.empty()) return 0;
    const double radius = std::max(std::abs(ascending.front()), std::abs(ascending.back()));
    const double width = degeneracy_tol * std::max(1.0, radius);
    const double top = ascending.back();
    int count = 0;
    for (auto it = ascending.rbegin(); it != ascending.rend() && top - *it <= width; ++it) ++count;
    return count;
}

} // namespace omax
