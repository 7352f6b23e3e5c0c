#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "omax/errors.hpp"

namespace omax {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Value type: every operation returns a
/// fresh matrix, nothing is mutated in place by the free functions below.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows <= 0 || cols <= 0)
            throw invalid_input("CMatrix: dimensions must be positive");
    }

    static CMatrix zeros(int rows, int cols) { return CMatrix(rows, cols); }

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static CMatrix scaled_identity(int n, cplx z) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = z;
        return m;
    }

    static CMatrix diag(const std::vector<cplx>& d) {
        CMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }

    static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
        const int r = static_cast<int>(rows.size());
        const int c = static_cast<int>(rows.begin()->size());
        CMatrix m(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c)
                throw invalid_input("CMatrix::from_rows: ragged rows");
            int j = 0;
            for (cplx z : row) m.at(i, j++) = z;
            ++i;
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    cplx at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    CMatrix adjoint() const {
        CMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m.at(j, i) = std::conj(at(i, j));
        return m;
    }

    CMatrix transpose() const {
        CMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    CMatrix conjugate() const {
        CMatrix m(rows_, cols_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
        return m;
    }

    cplx trace() const {
        cplx t = 0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
        return t;
    }

    double frob_norm() const {
        double s = 0;
        for (cplx z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_norm() const {
        double s = 0;
        for (cplx z : a_) s = std::max(s, std::abs(z));
        return s;
    }

    bool all_finite() const {
        for (cplx z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    CMatrix block(int i0, int j0, int r, int c) const {
        CMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
        return m;
    }

    void set_block(int i0, int j0, const CMatrix& b) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) at(i0 + i, j0 + j) = b.at(i, j);
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> a_;
};

inline CMatrix operator+(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw invalid_input("matrix addition: shape mismatch");
    CMatrix m = x;
    for (size_t k = 0; k < m.data().size(); ++k) m.data()[k] += y.data()[k];
    return m;
}

inline CMatrix operator-(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw invalid_input("matrix subtraction: shape mismatch");
    CMatrix m = x;
    for (size_t k = 0; k < m.data().size(); ++k) m.data()[k] -= y.data()[k];
    return m;
}

inline CMatrix operator-(const CMatrix& x) {
    CMatrix m = x;
    for (auto& z : m.data()) z = -z;
    return m;
}

inline CMatrix operator*(cplx s, const CMatrix& x) {
    CMatrix m = x;
    for (auto& z : m.data()) z *= s;
    return m;
}

inline CMatrix operator*(const CMatrix& x, cplx s) { return s * x; }
inline CMatrix operator*(double s, const CMatrix& x) { return cplx(s, 0) * x; }
inline CMatrix operator*(const CMatrix& x, double s) { return cplx(s, 0) * x; }

inline CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    if (x.cols() != y.rows()) throw invalid_input("matrix product: shape mismatch");
    CMatrix m(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            const cplx xik = x.at(i, k);
            if (xik == cplx(0, 0)) continue;
            for (int j = 0; j < y.cols(); ++j) m.at(i, j) += xik * y.at(k, j);
        }
    return m;
}

// --- vector helpers (column vectors as std::vector<cplx>) ---

inline std::vector<cplx> matvec(const CMatrix& m, const std::vector<cplx>& x) {
    if (m.cols() != static_cast<int>(x.size())) throw invalid_input("matvec: shape mismatch");
    std::vector<cplx> y(m.rows(), cplx(0, 0));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) y[i] += m.at(i, j) * x[j];
    return y;
}

/// Inner product <x, y> = y* x, conjugate-linear in the second argument.
inline cplx inner(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx s = 0;
    for (size_t k = 0; k < x.size(); ++k) s += std::conj(y[k]) * x[k];
    return s;
}

inline double vec_norm(const std::vector<cplx>& x) {
    double s = 0;
    for (cplx z : x) s += std::norm(z);
    return std::sqrt(s);
}

/// Re <Hx, x>; exact expectation value when H is Hermitian.
inline double expectation(const CMatrix& h, const std::vector<cplx>& x) {
    return inner(matvec(h, x), x).real();
}

inline CMatrix outer(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    CMatrix m(static_cast<int>(x.size()), static_cast<int>(y.size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = x[i] * std::conj(y[j]);
    return m;
}

} // namespace omax
