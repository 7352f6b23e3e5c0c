#pragma once

#include "omax/errors.hpp"

namespace omax {

/// Numerical knobs shared across the toolkit. All runs are reproducible
/// given the same config and seed.
struct ToleranceConfig {
    double hermitian_tol = 1e-12;  // max-norm slack for A = A*
    double psd_tol = 1e-9;         // eigenvalue floor for PSD checks
    double eig_tol = 1e-12;        // Jacobi off-diagonal target / sv cutoff
    double degeneracy_tol = 1e-8;  // eigenvalue clustering width (scaled by norm)
    double support_gap_tol = 1e-9; // slack for support-function comparisons
    int sweep_samples = 720;       // default boundary sweep resolution
    long max_sdp_iters = 100000;   // alternating-projection iteration cap
    double sdp_conv_tol = 1e-8;    // constraint residual target for the solver

    void validate() const {
        if (hermitian_tol <= 0 || psd_tol <= 0 || eig_tol <= 0 || degeneracy_tol <= 0 ||
            support_gap_tol <= 0 || sdp_conv_tol <= 0)
            throw invalid_input("ToleranceConfig: tolerances must be positive");
        if (sweep_samples < 90) throw invalid_input("ToleranceConfig: sweep_samples must be >= 90");
        if (max_sdp_iters <= 0) throw invalid_input("ToleranceConfig: max_sdp_iters must be positive");
    }
};

} // namespace omax
