#pragma once

#include <optional>
#include <vector>

#include "omax/matfun.hpp"
#include "omax/tuple.hpp"

namespace omax {

/// Choi matrix of a unital map M_n -> M_k: block matrix (C_ij) with
/// C_ij in M_k, PSD and satisfying sum_j C_jj = I_k.
struct ChoiMatrix {
    int n = 0;
    int k = 0;
    HermitianMatrix c;

    ChoiMatrix(int n_, int k_, HermitianMatrix c_) : n(n_), k(k_), c(std::move(c_)) {
        if (c.dim() != n * k) throw invalid_input("ChoiMatrix: dimension must be n*k");
    }

    CMatrix block(int i, int j) const { return c.mat().block(i * k, j * k, k, k); }
};

/// Isometry V: C^k -> C^n (x) C^r realizing B_l = V*(A_l (x) I_r)V.
struct DilationIsometry {
    int n = 0;
    int k = 0;
    int r = 0;
    CMatrix v; // (n*r) x k

    DilationIsometry(int n_, int k_, int r_, CMatrix v_) : n(n_), k(k_), r(r_), v(std::move(v_)) {
        if (v.rows() != n * r || v.cols() != k)
            throw invalid_input("DilationIsometry: V must be (n*r) x k");
    }
};

/// Farkas-type certificate of infeasibility: Hermitian (Z_0, ..., Z_m) with
/// I_n (x) Z_0 + sum_l A_l^T (x) Z_l >= 0 and tr Z_0 + sum_l tr(B_l Z_l) < 0.
struct DualWitness {
    int k = 0;
    std::vector<HermitianMatrix> z; // m+1 matrices of size k
};

enum class Feasibility { Feasible, Infeasible, Unknown };

struct FeasibilityResult {
    Feasibility status = Feasibility::Unknown;
    std::optional<ChoiMatrix> choi;
    std::optional<DilationIsometry> isometry;
    std::optional<DualWitness> witness;
    long iterations = 0;
    double residual = 0;
};

/// Pure check of a dilation certificate; never trusts the solver.
inline bool verify_dilation(const DilationIsometry& vi, const OperatorTuple& a,
                            const OperatorTuple& b, double tol) {
    if (vi.n != a.dim || vi.k != b.dim || a.m() != b.m())
        throw invalid_input("verify_dilation: shape mismatch");
    const CMatrix& v = vi.v;
    const CMatrix gram = v.adjoint() * v;
    if ((gram - CMatrix::identity(vi.k)).max_norm() > tol) return false;
    const CMatrix ir = CMatrix::identity(vi.r);
    for (int l = 0; l < a.m(); ++l) {
        const CMatrix compressed = v.adjoint() * (kron(a.ops[l].mat(), ir) * v);
        if ((compressed - b.ops[l].mat()).max_norm() > tol) return false;
    }
    return true;
}

/// The big matrix the witness must keep PSD.
inline CMatrix witness_lmi(const DualWitness& w, const OperatorTuple& a) {
    CMatrix m = kron(CMatrix::identity(a.dim), w.z[0].mat());
    for (int l = 0; l < a.m(); ++l) m = m + kron(a.ops[l].mat().transpose(), w.z[l + 1].mat());
    return m;
}

/// tr Z_0 + sum_l tr(B_l Z_l); must be strictly negative for a valid witness.
inline double witness_pairing(const DualWitness& w, const OperatorTuple& b) {
    double s = w.z[0].mat().trace().real();
    for (int l = 0; l < b.m(); ++l) s += (b.ops[l].mat() * w.z[l + 1].mat()).trace().real();
    return s;
}

/// Soundness of the witness: for a feasible Choi matrix C (PSD, unital,
/// moment-matching) and any Hermitian tuple Z,
///
///   tr( C * (I_n (x) Z_0 + sum_l A_l^T (x) Z_l) )
///     = sum_j tr(C_jj Z_0) + sum_l sum_ij (A_l)_ij tr(C_ij Z_l)
///     = tr(Z_0) + sum_l tr(B_l Z_l),
///
/// using tr(C (M^T (x) Z)) = sum_ij M_ij tr(C_ij Z), unitality for the first
/// term and the moment constraints for the rest. If the left factor is PSD
/// the trace is >= 0, so a witness with negative pairing precludes any
/// feasible C.
inline bool verify_dual_witness(const DualWitness& w, const OperatorTuple& a,
                                const OperatorTuple& b, const ToleranceConfig& cfg = {}) {
    if (static_cast<int>(w.z.size()) != a.m() + 1 || a.m() != b.m())
        throw invalid_input("verify_dual_witness: size mismatch");
    for (const auto& z : w.z)
        if (z.dim() != b.dim) throw invalid_input("verify_dual_witness: Z size mismatch");
    const double lm = lambda_min(hermitian_part(witness_lmi(w, a), 1e-9), cfg);
    if (lm < -cfg.psd_tol) return false;
    return witness_pairing(w, b) <= -10.0 * cfg.psd_tol;
}

/// Residuals of a Choi certificate against the pair (A, B).
struct ChoiCheck {
    double lambda_min = 0;
    double unitality = 0; // max-norm of sum_j C_jj - I
    double moments = 0;   // max over l of max-norm of sum_ij (A_l)_ij C_ij - B_l
};

inline ChoiCheck check_choi(const ChoiMatrix& c, const OperatorTuple& a, const OperatorTuple& b,
                            const ToleranceConfig& cfg = {}) {
    ChoiCheck out;
    out.lambda_min = lambda_min(c.c, cfg);
    CMatrix partial(c.k, c.k);
    for (int j = 0; j < c.n; ++j) partial = partial + c.block(j, j);
    out.unitality = (partial - CMatrix::identity(c.k)).max_norm();
    for (int l = 0; l < a.m(); ++l) {
        CMatrix s(c.k, c.k);
        for (int i = 0; i < c.n; ++i)
            for (int j = 0; j < c.n; ++j) {
                const cplx aij = a.ops[l].mat().at(i, j);
                if (aij != cplx(0, 0)) s = s + aij * c.block(i, j);
            }
        out.moments = std::max(out.moments, (s - b.ops[l].mat()).max_norm());
    }
    return out;
}

/// Stack the n column-blocks of C^{1/2} into the dilation isometry; r = nk.
/// V*V = sum_j (C)_jj = I_k and V*(A_l (x) I)V = sum_ij (A_l)_ij C_ij = B_l.
inline DilationIsometry extract_isometry(const ChoiMatrix& choi, const OperatorTuple& a,
                                         const OperatorTuple& b, const ToleranceConfig& cfg = {}) {
    const int n = choi.n, k = choi.k, r = n * k;
    const CMatrix s = psd_sqrt(choi.c, cfg);
    CMatrix v(n * r, k);
    for (int blk = 0; blk < n; ++blk)
        for (int row = 0; row < r; ++row)
            for (int col = 0; col < k; ++col) v.at(blk * r + row, col) = s.at(row, blk * k + col);
    DilationIsometry iso(n, k, r, std::move(v));
    if (!verify_dilation(iso, a, b, 1e-6)) {
        double worst = (iso.v.adjoint() * iso.v - CMatrix::identity(k)).max_norm();
        const CMatrix ir = CMatrix::identity(r);
        for (int l = 0; l < a.m(); ++l)
            worst = std::max(worst, (iso.v.adjoint() * (kron(a.ops[l].mat(), ir) * iso.v) -
                                     b.ops[l].mat())
                                        .max_norm());
        throw internal_inconsistency("extract_isometry: dilation residual " +
                                     std::to_string(worst) + " exceeds 1e-6");
    }
    return iso;
}

} // namespace omax
