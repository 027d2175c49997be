#include "slmfg/fixed_point.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "slmfg/error.hpp"
#include "slmfg/fokker_planck.hpp"
#include "slmfg/mollifier.hpp"

namespace slmfg {

void FixedPointConfig::validate() const {
    if (!(tau > 0.0)) throw SolverError("fixed point: tau must be positive");
    if (max_iters < 1) throw SolverError("fixed point: max_iters must be >= 1");
    if (!(damping >= 0.0 && damping < 1.0)) {
        throw SolverError("fixed point: damping must lie in [0, 1)");
    }
}

BestResponse best_response(const MfgProblem& problem, const Grid& grid, double epsilon,
                           const DensityField& mu, const MinimizerConfig& min_cfg,
                           std::size_t workers) {
    const auto kernel = build_mollifier(epsilon, grid);
    BestResponse out;
    out.v = solve_backward(problem, mu, grid, min_cfg, workers);
    out.drift = mollified_gradient(out.v, kernel, grid);
    out.m = solve_forward(mu.slice(0), out.drift, problem.sigma, grid, &out.clamp_count, workers);
    return out;
}

MfgSolution solve(const MfgProblem& problem, const Grid& grid, double epsilon,
                  const FixedPointConfig& fp_cfg, const MinimizerConfig& min_cfg,
                  const IterationObserver& observer) {
    fp_cfg.validate();
    min_cfg.validate();
    build_mollifier(epsilon, grid);  // reject under-resolved epsilon before iterating

    const std::size_t n = grid.num_nodes();
    const std::size_t slices = grid.num_steps() + 1;
    const auto m0 = initial_density(problem.initial_density, grid);
    DensityField mu(n, slices);
    for (std::size_t k = 0; k < slices; ++k) {
        std::copy(m0.begin(), m0.end(), mu.slice(k).begin());
    }

    MfgSolution sol;
    const double scale = fp_cfg.density_scaled_errors ? 1.0 / grid.rho() : 1.0;
    for (std::size_t p = 1; p <= fp_cfg.max_iters; ++p) {
        BestResponse next;
        try {
            next = best_response(problem, grid, epsilon, mu, min_cfg, fp_cfg.workers);
        } catch (const SolverError& e) {
            throw SolverError("fixed point iteration " + std::to_string(p) + ": " + e.what());
        }
        if (fp_cfg.damping > 0.0) {
            for (std::size_t k = 0; k < slices; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    next.m(i, k) = (1.0 - fp_cfg.damping) * next.m(i, k) + fp_cfg.damping * mu(i, k);
                }
            }
        }
        ErrorReport report;
        report.iteration = p;
        report.e_m = sup_norm_diff(next.m, mu) * scale;
        report.e_v = p == 1 ? std::numeric_limits<double>::infinity() : sup_norm_diff(next.v, sol.v);
        sol.history.push_back(report);
        if (observer) observer(report);

        mu = next.m;
        sol.v = std::move(next.v);
        sol.drift = std::move(next.drift);
        sol.m = std::move(next.m);
        sol.clamp_count = next.clamp_count;
        if (report.e_v <= fp_cfg.tau && report.e_m <= fp_cfg.tau) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

}  // namespace slmfg
