#include "slmfg/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slmfg/error.hpp"
#include "slmfg/parallel.hpp"

namespace slmfg {

void MinimizerConfig::validate() const {
    if (control_bound && !(*control_bound > 0.0 && std::isfinite(*control_bound))) {
        throw SolverError("minimizer: control_bound must be positive");
    }
    if (coarse_count < 3 || coarse_count % 2 == 0) {
        throw SolverError("minimizer: coarse_count must be odd and >= 3 (empty or asymmetric "
                          "candidate set)");
    }
}

double slice_lipschitz(std::span<const double> f, double rho) {
    double lip = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        lip = std::max(lip, std::abs(f[i + 1] - f[i]) / rho);
    }
    return lip;
}

double default_control_bound(std::span<const double> f, double rho) {
    return 2.0 * slice_lipschitz(f, rho) + 1.0;
}

namespace {

struct Search {
    double value;
    double alpha;

    // strictly better, or equal with the smaller |alpha|, then smaller alpha
    bool improved_by(double v, double a) const {
        if (v < value) return true;
        if (v > value) return false;
        const double aa = std::abs(a), ab = std::abs(alpha);
        return aa < ab || (aa == ab && a < alpha);
    }
    void offer(double v, double a) {
        if (improved_by(v, a)) {
            value = v;
            alpha = a;
        }
    }
};

}  // namespace

ControlChoice s_hat(const Grid& grid, std::span<const double> f, std::size_t i, double mu_cost,
                    double sigma_k, double control_bound, const MinimizerConfig& cfg) {
    if (cfg.coarse_count < 3 || cfg.coarse_count % 2 == 0 || !(control_bound > 0.0)) {
        throw SolverError("s_hat: empty or misconfigured candidate set");
    }
    const double h = grid.h();
    const double x = grid.node(i);
    const double spread = std::sqrt(h) * sigma_k;
    const auto objective = [&](double alpha) {
        const double foot = x - h * alpha;
        const double avg =
            0.5 * (interpolate(grid, f, foot + spread) + interpolate(grid, f, foot - spread));
        return avg + 0.5 * h * alpha * alpha + mu_cost;
    };

    const double bound = control_bound;
    const auto intervals = static_cast<double>(cfg.coarse_count - 1);
    Search best{objective(0.0), 0.0};
    for (std::size_t c = 0; c < cfg.coarse_count; ++c) {
        const double alpha = bound * (2.0 * static_cast<double>(c) - intervals) / intervals;
        best.offer(objective(alpha), alpha);
    }

    double step = 2.0 * bound / intervals;
    for (std::size_t r = 0; r < cfg.refine_iters; ++r) {
        const double b = best.alpha;
        const double fb = best.value;
        const double a = std::max(-bound, b - step);
        const double c = std::min(bound, b + step);
        const double fa = a < b ? objective(a) : fb;
        const double fc = c > b ? objective(c) : fb;
        best.offer(fa, a);
        best.offer(fc, c);
        if (a < b && b < c) {
            // vertex of the parabola through (a,fa), (b,fb), (c,fc)
            const double p = (b - a) * (fb - fc);
            const double q = (b - c) * (fb - fa);
            const double denom = p - q;
            if (denom < 0.0) {
                double vertex = b - 0.5 * ((b - a) * p - (b - c) * q) / denom;
                vertex = std::clamp(vertex, a, c);
                best.offer(objective(vertex), vertex);
            }
        }
        step *= 0.25;
    }
    return {best.value, best.alpha};
}

ValueField solve_backward(const SpaceTimeField& running_cost, std::span<const double> terminal,
                          const std::function<double(double)>& sigma, const Grid& grid,
                          const MinimizerConfig& cfg, std::size_t workers) {
    cfg.validate();
    const std::size_t n = grid.num_nodes();
    const std::size_t steps = grid.num_steps();
    if (running_cost.num_nodes() != n || running_cost.num_slices() < steps) {
        throw SolverError("solve_backward: running cost field does not match the grid");
    }
    if (terminal.size() != n) {
        throw SolverError("solve_backward: terminal slice has wrong length");
    }
    ValueField v(n, steps + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(terminal[i])) {
            throw SolverError("terminal cost is not finite at (i=" + std::to_string(i) +
                              ", k=" + std::to_string(steps) + ")");
        }
        v(i, steps) = terminal[i];
    }
    const double h = grid.h();
    for (std::size_t k = steps; k-- > 0;) {
        const auto next = v.slice(k + 1);
        const double sigma_k = sigma(grid.time(k));
        if (!std::isfinite(sigma_k)) {
            throw SolverError("sigma is not finite at k=" + std::to_string(k));
        }
        const double bound = cfg.control_bound ? *cfg.control_bound
                                               : default_control_bound(next, grid.rho());
        auto current = v.slice(k);
        parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                current[i] =
                    s_hat(grid, next, i, h * running_cost(i, k), sigma_k, bound, cfg).value;
            }
        });
    }
    return v;
}

ValueField solve_backward(const MfgProblem& problem, const DensityField& mu, const Grid& grid,
                          const MinimizerConfig& cfg, std::size_t workers) {
    const std::size_t n = grid.num_nodes();
    const std::size_t steps = grid.num_steps();
    if (mu.num_nodes() != n || mu.num_slices() != steps + 1) {
        throw SolverError("solve_backward: density path is not defined on this grid");
    }
    std::optional<InteractionKernel> kernel;
    if (problem.interaction_weight != 0.0) {
        kernel = InteractionKernel::build(problem.delta, grid, problem.interaction_scaling);
    }

    SpaceTimeField cost(n, steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto slice = running_cost_slice(problem, grid, kernel ? &*kernel : nullptr,
                                              mu.slice(k), k);
        std::copy(slice.begin(), slice.end(), cost.slice(k).begin());
    }
    NodeFunction terminal(n);
    for (std::size_t i = 0; i < n; ++i) {
        terminal[i] = problem.terminal_cost(grid.node(i), mu.slice(steps));
    }
    return solve_backward(cost, terminal, problem.sigma, grid, cfg, workers);
}

}  // namespace slmfg
