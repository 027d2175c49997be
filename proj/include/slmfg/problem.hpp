#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slmfg/grid.hpp"

namespace slmfg {

/// How phi_delta in V_delta = phi_delta * (phi_delta * m) is scaled.
///
/// `literal`: phi_delta(x) = exp(-x^2 / (2 delta^2)) / sqrt(2 pi), which has
/// mass delta, so the composed kernel is delta^2 times the unit Gaussian
/// density of standard deviation delta*sqrt(2).
/// `normalized`: phi_delta is the unit-mass Gaussian density.
enum class InteractionScaling { literal, normalized };

/// Data of the one-dimensional MFG system on a bounded domain.
///
/// The running cost is F(x, m) = f(x, t) + interaction_weight * V_delta(x, m)
/// where V_delta is a double Gaussian convolution of the density. Setting
/// interaction_weight to zero decouples the HJB equation from the density.
struct MfgProblem {
    std::string name;
    std::function<double(double x, double t)> running_cost;
    std::function<double(double x, std::span<const double> terminal_density)> terminal_cost;
    std::function<double(double t)> sigma;
    std::function<double(double x)> initial_density;
    double delta = 0.2;
    double interaction_weight = 1.0;
    InteractionScaling interaction_scaling = InteractionScaling::literal;
    double x_min = 0.0;
    double x_max = 1.0;
    double T = 2.0;
};

/// Grid sampling of phi_delta * phi_delta, a Gaussian with standard
/// deviation delta*sqrt(2), on the offsets -(n-1)..(n-1).
class InteractionKernel {
public:
    static InteractionKernel build(double delta, const Grid& grid,
                                   InteractionScaling scaling = InteractionScaling::literal);

    double delta() const { return delta_; }
    /// K(offset * rho); |offset| < num_nodes.
    double at(long offset) const { return weights_[static_cast<std::size_t>(offset + span_)]; }
    long span() const { return span_; }
    double max_weight() const { return weights_[static_cast<std::size_t>(span_)]; }

private:
    double delta_ = 0.0;
    long span_ = 0;
    std::vector<double> weights_;
};

/// Gaussian density with standard deviation `stddev`, normalised so that
/// rho * sum over the whole lattice equals one.
std::vector<double> lattice_gaussian(double stddev, double rho, long span);

/// V_delta(x_i, m) = sum_j K(x_i - x_j) m_j.
NodeFunction interaction_cost(std::span<const double> m, const InteractionKernel& kernel,
                              const Grid& grid);

/// F(x_i, mu(t_k)) for every node, with kernel == nullptr meaning no coupling.
NodeFunction running_cost_slice(const MfgProblem& problem, const Grid& grid,
                                const InteractionKernel* kernel, std::span<const double> mu_k,
                                std::size_t k);

/// The three benchmark configurations: 1 deterministic, 2 constant
/// diffusion 0.2, 3 diffusion max(0, 0.2 - |t - 1|) that vanishes outside
/// (0.8, 1.2).
MfgProblem test_problem(int id);

}  // namespace slmfg
