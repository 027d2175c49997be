#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "slmfg/grid.hpp"
#include "slmfg/hjb.hpp"
#include "slmfg/metrics.hpp"
#include "slmfg/problem.hpp"

namespace slmfg {

/// Picard iteration settings.
///
/// `damping` is the weight kept on the previous density iterate,
/// m <- (1 - damping) m_new + damping m_old; zero is the plain iteration.
struct FixedPointConfig {
    double tau = 1e-3;
    std::size_t max_iters = 50;
    double damping = 0.0;
    /// report E(m) on m/rho instead of the dimensionless weights
    bool density_scaled_errors = false;
    std::size_t workers = 1;

    void validate() const;
};

/// One evaluation of the map mu -> m[mu] together with its intermediates.
struct BestResponse {
    ValueField v;
    DriftField drift;
    DensityField m;
    std::size_t clamp_count = 0;
};

BestResponse best_response(const MfgProblem& problem, const Grid& grid, double epsilon,
                           const DensityField& mu, const MinimizerConfig& min_cfg,
                           std::size_t workers = 1);

struct MfgSolution {
    ValueField v;
    DensityField m;
    DriftField drift;
    std::vector<ErrorReport> history;
    bool converged = false;
    /// flow images projected back into the domain during the last forward pass
    std::size_t clamp_count = 0;
};

using IterationObserver = std::function<void(const ErrorReport&)>;

/// Fixed-point iteration mu -> v[mu] -> Dv^eps[mu] -> m[mu] started from the
/// frozen initial density. Stops once both E(v) and E(m) are <= tau; the first
/// iteration has no previous value field, so E(v) is +inf there.
/// Non-convergence is reported through `converged`, not by throwing.
MfgSolution solve(const MfgProblem& problem, const Grid& grid, double epsilon,
                  const FixedPointConfig& fp_cfg, const MinimizerConfig& min_cfg,
                  const IterationObserver& observer = {});

}  // namespace slmfg
