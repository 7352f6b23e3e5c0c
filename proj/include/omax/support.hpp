#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "omax/tuple.hpp"

namespace omax {

/// One evaluation of the support function h(u) = lambda_max(sum u_j T_j),
/// together with the maximizing state and its joint expectation point.
struct SupportSample {
    std::vector<double> direction; // unit m-vector
    double value = 0;              // h(u)
    std::vector<cplx> maximizer;   // top eigenvector
    std::vector<double> point;     // joint expectation at the maximizer
    int multiplicity = 1;          // top eigenvalue cluster size
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline CMatrix direction_matrix(const OperatorTuple& t, const std::vector<double>& u) {
    CMatrix h(t.dim, t.dim);
    for (int j = 0; j < t.m(); ++j) h = h + u[j] * t.ops[j].mat();
    return h;
}

/// Support of the joint numerical range in direction u (normalized internally).
inline SupportSample support(const OperatorTuple& t, const std::vector<double>& u,
                             const ToleranceConfig& cfg = {}) {
    if (static_cast<int>(u.size()) != t.m())
        throw invalid_input("support: direction length must match tuple length");
    const double nu = norm2(u);
    if (nu <= 0 || !std::isfinite(nu)) throw invalid_input("support: direction must be nonzero");

    SupportSample s;
    s.direction.resize(u.size());
    for (size_t k = 0; k < u.size(); ++k) s.direction[k] = u[k] / nu;

    const EigDecomposition eig =
        herm_eig(hermitian_part(direction_matrix(t, s.direction), 1e-9), cfg);
    s.value = eig.values.back();
    s.maximizer = eig_column(eig, t.dim - 1);
    s.point = joint_point(t, s.maximizer);
    s.multiplicity = top_cluster_size(eig.values, cfg.degeneracy_tol);
    return s;
}

namespace detail {

/// Acklam's rational approximation to the inverse normal CDF (|err| < 1.2e-9),
/// used to push low-discrepancy points onto the sphere.
inline double inv_norm_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    if (p <= 0) p = 1e-16;
    if (p >= 1) p = 1 - 1e-16;
    if (p < plow) {
        const double q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > phigh) {
        const double q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

inline double halton(std::uint64_t i, int base) {
    double f = 1.0, x = 0.0;
    while (i > 0) {
        f /= base;
        x += f * static_cast<double>(i % base);
        i /= base;
    }
    return x;
}

} // namespace detail

/// Unit directions covering S^{m-1}: {+1,-1} for m = 1, equally spaced angles
/// for m = 2, and a seeded Halton sequence mapped through the Gaussian for
/// m >= 3 (low-discrepancy, deterministic).
inline std::vector<std::vector<double>> sphere_directions(int m, int samples,
                                                          std::uint64_t seed = 0) {
    if (m < 1) throw invalid_input("sphere_directions: m must be >= 1");
    std::vector<std::vector<double>> dirs;
    if (m == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
        return dirs;
    }
    if (m == 2) {
        dirs.reserve(samples);
        for (int k = 0; k < samples; ++k) {
            const double th = 2.0 * M_PI * k / samples;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
        return dirs;
    }
    static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    if (m > 10) throw invalid_input("sphere_directions: m > 10 not supported");
    dirs.reserve(samples);
    const std::uint64_t offset = 1000 + (seed % 100003) * 131;
    for (int k = 0; k < samples; ++k) {
        std::vector<double> u(m);
        double nu = 0;
        for (int j = 0; j < m; ++j) {
            u[j] = detail::inv_norm_cdf(detail::halton(offset + k, bases[j]));
            nu += u[j] * u[j];
        }
        nu = std::sqrt(nu);
        if (nu < 1e-12) {
            u.assign(m, 0.0);
            u[0] = 1.0;
            nu = 1.0;
        }
        for (auto& x : u) x /= nu;
        dirs.push_back(std::move(u));
    }
    return dirs;
}

struct InclusionReport {
    bool included = false;
    double worst_gap = 0;                // max over directions of h_B - h_A
    std::vector<double> worst_direction; // where the max is attained
};

/// Sampled test of W(B) subset of cl conv W(A) via support comparison:
/// inclusion holds iff h_B(u) <= h_A(u) for every unit direction u. For
/// m >= 3 the sampling makes a "true" verdict valid at sampled resolution only.
inline InclusionReport includes(const OperatorTuple& b, const OperatorTuple& a, int samples,
                                const ToleranceConfig& cfg = {}) {
    if (b.m() != a.m()) throw invalid_input("includes: tuples must have the same length");
    InclusionReport rep;
    rep.worst_gap = -std::numeric_limits<double>::infinity();
    for (const auto& u : sphere_directions(a.m(), samples, 0)) {
        const double gap = support(b, u, cfg).value - support(a, u, cfg).value;
        if (gap > rep.worst_gap) {
            rep.worst_gap = gap;
            rep.worst_direction = u;
        }
    }
    rep.included = rep.worst_gap <= cfg.support_gap_tol;
    return rep;
}

} // namespace omax
