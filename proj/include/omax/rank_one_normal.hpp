#pragma once

#include <optional>

#include "omax/hermeig.hpp"
#include "omax/tuple.hpp"

namespace omax {

struct RankOneNormal {
    double theta = 0;          // H(theta) = cos(theta) Re A + sin(theta) Im A
    double c = 0;              // the (n-1)-fold eigenvalue
    double s = 0;              // H(theta) - cI = s * xx*
    std::vector<cplx> x;       // unit vector of the rank-one factor
};

namespace detail {

/// Spread of the tightest (n-1)-element eigenvalue window; zero exactly when
/// some eigenvalue has multiplicity n-1.
inline double cluster_spread(const std::vector<double>& v) {
    const size_t n = v.size();
    return std::min(v[n - 2] - v[0], v[n - 1] - v[1]);
}

} // namespace detail

/// Search span{I, Re A, Im A} for a rank-one normal member: sweep
/// H(theta) = cos(theta) Re A + sin(theta) Im A over [0, pi) for an
/// eigenvalue of multiplicity n-1, refining local minima of the cluster
/// spread by ternary search, and verify the rank-one factorization to 1e-7.
inline std::optional<RankOneNormal> rank_one_normal_in_span(const CMatrix& a, int samples = 3600,
                                                            const ToleranceConfig& cfg = {}) {
    if (!a.is_square()) throw invalid_input("rank_one_normal_in_span: matrix must be square");
    const int n = a.rows();
    const CMatrix re = real_part(a), im = imag_part(a);

    auto hmat = [&](double theta) {
        return real_part(std::cos(theta) * re + std::sin(theta) * im);
    };

    auto certify = [&](double theta) -> std::optional<RankOneNormal> {
        const CMatrix h = hmat(theta);
        const EigDecomposition eig = herm_eig(HermitianMatrix(h, 1e-9), cfg);
        // Two candidate clusters: drop the top eigenvalue or the bottom one.
        for (const bool drop_top : {true, false}) {
            double c = 0;
            for (int i = 0; i < n; ++i)
                if (i != (drop_top ? n - 1 : 0)) c += eig.values[i];
            if (n > 1) c /= (n - 1);
            const int outlier = drop_top ? n - 1 : 0;
            RankOneNormal r;
            r.theta = theta;
            r.c = c;
            r.s = eig.values[outlier] - c;
            r.x = eig_column(eig, outlier);
            CMatrix residual = h - CMatrix::scaled_identity(n, c) - r.s * outer(r.x, r.x);
            if (residual.max_norm() <= 1e-7) return r;
        }
        return std::nullopt;
    };

    if (n == 1) {
        RankOneNormal r;
        r.theta = 0;
        r.c = re.at(0, 0).real() - 1;
        r.s = 1;
        r.x = {cplx(1, 0)};
        return r;
    }

    if (n == 2) {
        // Every eigenvalue of a 2x2 has multiplicity n-1 = 1; any direction
        // with a nonscalar member works.
        for (const double theta : {0.0, M_PI_2, M_PI_4}) {
            const CMatrix h = hmat(theta);
            if ((h - CMatrix::scaled_identity(2, h.trace().real() / 2)).max_norm() > 1e-12)
                return certify(theta);
        }
        return std::nullopt; // A is scalar
    }

    std::vector<double> spread(samples);
    for (int k = 0; k < samples; ++k) {
        const double theta = M_PI * k / samples;
        spread[k] = detail::cluster_spread(herm_eig(HermitianMatrix(hmat(theta), 1e-9), cfg).values);
    }

    auto spread_at = [&](double theta) {
        return detail::cluster_spread(herm_eig(HermitianMatrix(hmat(theta), 1e-9), cfg).values);
    };

    for (int k = 0; k < samples; ++k) {
        const int prev = (k + samples - 1) % samples;
        const int next = (k + 1) % samples;
        if (spread[k] > spread[prev] || spread[k] > spread[next]) continue; // not a local minimum
        // Ternary refinement over the bracket around the local minimum.
        const double step = M_PI / samples;
        double lo = M_PI * k / samples - step, hi = M_PI * k / samples + step;
        for (int it = 0; it < 90 && hi - lo > 1e-13; ++it) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (spread_at(m1) <= spread_at(m2))
                hi = m2;
            else
                lo = m1;
        }
        const double theta = 0.5 * (lo + hi);
        if (auto r = certify(theta < 0 ? theta + M_PI : std::fmod(theta, M_PI))) return r;
    }
    return std::nullopt;
}

} // namespace omax
