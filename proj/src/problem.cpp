#include "slmfg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slmfg/error.hpp"

namespace slmfg {

std::vector<double> lattice_gaussian(double stddev, double rho, long span) {
    // Normalisation runs over offsets well past the tail so truncation to
    // `span` does not alter the returned samples.
    const long tail = std::max(span, static_cast<long>(std::ceil(40.0 * stddev / rho)));
    const auto profile = [&](long j) {
        const double x = static_cast<double>(j) * rho;
        return std::exp(-x * x / (2.0 * stddev * stddev));
    };
    double mass = profile(0);
    for (long j = tail; j >= 1; --j) mass += 2.0 * profile(j);
    mass *= rho;
    std::vector<double> w(static_cast<std::size_t>(2 * span + 1));
    for (long j = -span; j <= span; ++j) {
        w[static_cast<std::size_t>(j + span)] = profile(j) / mass;
    }
    return w;
}

InteractionKernel InteractionKernel::build(double delta, const Grid& grid,
                                           InteractionScaling scaling) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw SolverError("interaction kernel: delta must be positive");
    }
    InteractionKernel k;
    k.delta_ = delta;
    k.span_ = static_cast<long>(grid.num_nodes()) - 1;
    k.weights_ = lattice_gaussian(delta * std::numbers::sqrt2, grid.rho(), k.span_);
    if (scaling == InteractionScaling::literal) {
        for (auto& w : k.weights_) w *= delta * delta;
    }
    return k;
}

NodeFunction interaction_cost(std::span<const double> m, const InteractionKernel& kernel,
                              const Grid& grid) {
    const std::size_t n = grid.num_nodes();
    NodeFunction out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += kernel.at(static_cast<long>(i) - static_cast<long>(j)) * m[j];
        }
        out[i] = acc;
    }
    return out;
}

NodeFunction running_cost_slice(const MfgProblem& problem, const Grid& grid,
                                const InteractionKernel* kernel, std::span<const double> mu_k,
                                std::size_t k) {
    const std::size_t n = grid.num_nodes();
    const double t = grid.time(k);
    NodeFunction cost(n);
    for (std::size_t i = 0; i < n; ++i) cost[i] = problem.running_cost(grid.node(i), t);
    if (kernel != nullptr && problem.interaction_weight != 0.0) {
        const auto v = interaction_cost(mu_k, *kernel, grid);
        for (std::size_t i = 0; i < n; ++i) cost[i] += problem.interaction_weight * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(cost[i])) {
            throw SolverError("running cost is not finite at (i=" + std::to_string(i) +
                              ", k=" + std::to_string(k) + ")");
        }
    }
    return cost;
}

MfgProblem test_problem(int id) {
    MfgProblem p;
    p.x_min = 0.0;
    p.x_max = 1.0;
    p.T = 2.0;
    p.delta = 0.2;
    p.interaction_weight = 1.0;
    p.running_cost = [](double x, double t) {
        const double target = (1.0 - std::sin(2.0 * std::numbers::pi * t)) / 2.0;
        return 5.0 * (x - target) * (x - target);
    };
    p.terminal_cost = [](double, std::span<const double>) { return 0.0; };

    // nu(x) = exp(-(x-0.5)^2 / 0.1^2), normalised on [0, 1]:
    // int_0^1 nu = 0.1 * sqrt(pi) * erf(5)
    const double nu_mass = 0.1 * std::sqrt(std::numbers::pi) * std::erf(5.0);
    p.initial_density = [nu_mass](double x) {
        if (x < 0.0 || x > 1.0) return 0.0;
        return std::exp(-(x - 0.5) * (x - 0.5) / 0.01) / nu_mass;
    };

    switch (id) {
        case 1:
            p.name = "test1";
            p.sigma = [](double) { return 0.0; };
            break;
        case 2:
            p.name = "test2";
            p.sigma = [](double) { return 0.2; };
            break;
        case 3:
            p.name = "test3";
            p.sigma = [](double t) { return std::max(0.0, 0.2 - std::abs(t - 1.0)); };
            break;
        default:
            throw SolverError("unknown test problem id " + std::to_string(id));
    }
    return p;
}

}  // namespace slmfg
