#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "omax/cmatrix.hpp"

namespace omax {

/// Deterministic random source. Gaussians come from our own Box-Muller over
/// mt19937_64 uniforms so that streams are identical across standard
/// libraries, which std::normal_distribution does not guarantee.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    cplx cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return cplx(re, im) * M_SQRT1_2;
    }

    /// Haar-distributed unit vector in C^n.
    std::vector<cplx> unit_vector(int n) {
        std::vector<cplx> x(n);
        double s = 0;
        do {
            for (auto& z : x) z = cgaussian();
            s = vec_norm(x);
        } while (s < 1e-12);
        for (auto& z : x) z /= s;
        return x;
    }

    CMatrix gaussian_matrix(int rows, int cols) {
        CMatrix m(rows, cols);
        for (auto& z : m.data()) z = cgaussian();
        return m;
    }

    CMatrix random_hermitian(int n) {
        const CMatrix g = gaussian_matrix(n, n);
        return 0.5 * (g + g.adjoint());
    }

    /// Haar-random unitary: QR of a Gaussian matrix by modified Gram-Schmidt
    /// with the R-diagonal phase absorbed.
    CMatrix random_unitary(int n) {
        CMatrix g = gaussian_matrix(n, n);
        CMatrix q(n, n);
        for (int j = 0; j < n; ++j) {
            std::vector<cplx> v(n);
            for (int i = 0; i < n; ++i) v[i] = g.at(i, j);
            for (int pass = 0; pass < 2; ++pass) {
                for (int k = 0; k < j; ++k) {
                    cplx proj = 0;
                    for (int i = 0; i < n; ++i) proj += std::conj(q.at(i, k)) * v[i];
                    for (int i = 0; i < n; ++i) v[i] -= proj * q.at(i, k);
                }
            }
            double nv = vec_norm(v);
            if (nv < 1e-12) { // essentially impossible; restart the column
                for (auto& z : v) z = cgaussian();
                nv = vec_norm(v);
            }
            for (int i = 0; i < n; ++i) q.at(i, j) = v[i] / nv;
        }
        return q;
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0;
};

} // namespace omax
