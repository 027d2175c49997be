#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "slmfg/grid.hpp"
#include "slmfg/problem.hpp"

namespace slmfg {

/// Search settings for the inner minimisation over the control alpha.
///
/// Candidates form an equispaced grid of `coarse_count` points in
/// [-bound, bound]; the best one is polished by `refine_iters` rounds of
/// three-point parabolic interpolation. When `control_bound` is unset the
/// bound is 2 L + 1 with L the Lipschitz constant of the slice being
/// interpolated, which keeps the exact minimiser strictly inside.
struct MinimizerConfig {
    std::optional<double> control_bound;
    std::size_t coarse_count = 65;
    std::size_t refine_iters = 3;

    void validate() const;
};

struct ControlChoice {
    double value;
    double alpha;
};

/// max_i |f_{i+1} - f_i| / rho
double slice_lipschitz(std::span<const double> f, double rho);

double default_control_bound(std::span<const double> f, double rho);

/// One semi-Lagrangian step at node i:
///
///   min_alpha  1/2 [ I[f](x_i - h alpha + sqrt(h) sigma) + I[f](x_i - h alpha - sqrt(h) sigma) ]
///              + h alpha^2 / 2 + mu_cost
///
/// with mu_cost = h F(x_i, mu(t_k)). Ties prefer the smallest |alpha|.
ControlChoice s_hat(const Grid& grid, std::span<const double> f, std::size_t i, double mu_cost,
                    double sigma_k, double control_bound, const MinimizerConfig& cfg);

/// Backward sweep v_{.,N} = G, v_{.,k} = S_hat(v_{.,k+1}) against the density
/// path `mu`. Nodes of one slice are split across `workers` threads; the
/// result does not depend on the worker count.
ValueField solve_backward(const MfgProblem& problem, const DensityField& mu, const Grid& grid,
                          const MinimizerConfig& cfg, std::size_t workers = 1);

/// Same sweep with the running cost already sampled: running_cost(i, k) is
/// F(x_i, mu(t_k)) and `terminal` holds v_{.,N}.
ValueField solve_backward(const SpaceTimeField& running_cost, std::span<const double> terminal,
                          const std::function<double(double)>& sigma, const Grid& grid,
                          const MinimizerConfig& cfg, std::size_t workers = 1);

}  // namespace slmfg
