#include "slmfg/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "slmfg/error.hpp"
#include "slmfg/parallel.hpp"

namespace slmfg {

NodeFunction initial_density(const std::function<double(double)>& m0, const Grid& grid,
                             std::size_t quad_points) {
    const std::size_t n = grid.num_nodes();
    NodeFunction m(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = cell_integral(grid, m0, i, quad_points);
        if (m[i] < 0.0) {
            throw SolverError("initial density is negative in cell " + std::to_string(i));
        }
        total += m[i];
    }
    if (total < 1e-6) {
        throw SolverError("m0 not supported in domain");
    }
    for (auto& w : m) w /= total;
    return m;
}

std::vector<FlowPair> flows(std::span<const double> drift_k, double sigma_k, const Grid& grid,
                            std::size_t* clamped) {
    const std::size_t n = grid.num_nodes();
    const double h = grid.h();
    const double spread = std::sqrt(h) * sigma_k;
    std::vector<FlowPair> out(n);
    std::size_t hits = 0;
    const auto project = [&](double y) {
        if (y < grid.x_min()) {
            ++hits;
            return grid.x_min();
        }
        if (y > grid.x_max()) {
            ++hits;
            return grid.x_max();
        }
        return y;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double centre = grid.node(i) - h * drift_k[i];
        out[i] = {project(centre + spread), project(centre - spread)};
    }
    if (clamped != nullptr) *clamped += hits;
    return out;
}

namespace {

void scatter(std::span<const double> m_k, std::span<const FlowPair> flow_pairs, const Grid& grid,
             std::size_t begin, std::size_t end, std::span<double> out) {
    for (std::size_t j = begin; j < end; ++j) {
        const double half = 0.5 * m_k[j];
        if (half == 0.0) continue;
        for (double image : {flow_pairs[j].plus, flow_pairs[j].minus}) {
            const auto w = barycentric_weights(grid, image);
            out[w.left] += w.w_left * half;
            out[w.left + 1] += w.w_right * half;
        }
    }
}

}  // namespace

NodeFunction push_forward(std::span<const double> m_k, std::span<const FlowPair> flow_pairs,
                          const Grid& grid, std::size_t workers) {
    const std::size_t n = grid.num_nodes();
    if (m_k.size() != n || flow_pairs.size() != n) {
        throw SolverError("push_forward: size mismatch with grid");
    }
    workers = std::clamp<std::size_t>(workers, 1, n);
    NodeFunction next(n, 0.0);
    if (workers == 1) {
        scatter(m_k, flow_pairs, grid, 0, n, next);
    } else {
        std::vector<NodeFunction> partial(workers, NodeFunction(n, 0.0));
        const std::size_t chunk = (n + workers - 1) / workers;
        parallel_for(workers, workers, [&](std::size_t wb, std::size_t we) {
            for (std::size_t w = wb; w < we; ++w) {
                const std::size_t begin = std::min(n, w * chunk);
                const std::size_t end = std::min(n, begin + chunk);
                scatter(m_k, flow_pairs, grid, begin, end, partial[w]);
            }
        });
        for (const auto& p : partial) {
            for (std::size_t i = 0; i < n; ++i) next[i] += p[i];
        }
    }
    const double before = std::accumulate(m_k.begin(), m_k.end(), 0.0);
    const double after = std::accumulate(next.begin(), next.end(), 0.0);
    if (!(std::abs(after - before) <= 1e-9)) {
        throw SolverError("push_forward: mass drift " + std::to_string(after - before));
    }
    return next;
}

DensityField solve_forward(std::span<const double> m0, const DriftField& drift,
                           const std::function<double(double)>& sigma, const Grid& grid,
                           std::size_t* clamped, std::size_t workers) {
    const std::size_t n = grid.num_nodes();
    const std::size_t steps = grid.num_steps();
    if (m0.size() != n || drift.num_nodes() != n || drift.num_slices() < steps) {
        throw SolverError("solve_forward: inputs do not match the grid");
    }
    DensityField m(n, steps + 1);
    std::copy(m0.begin(), m0.end(), m.slice(0).begin());
    for (std::size_t k = 0; k < steps; ++k) {
        const double sigma_k = sigma(grid.time(k));
        const auto pairs = flows(drift.slice(k), sigma_k, grid);
        if (clamped != nullptr) {
            // only images that actually carry mass are counted
            const double spread = std::sqrt(grid.h()) * sigma_k;
            for (std::size_t j = 0; j < n; ++j) {
                if (m(j, k) <= 0.0) continue;
                const double centre = grid.node(j) - grid.h() * drift(j, k);
                for (double y : {centre + spread, centre - spread}) {
                    if (y < grid.x_min() || y > grid.x_max()) ++*clamped;
                }
            }
        }
        const auto next = push_forward(m.slice(k), pairs, grid, workers);
        std::copy(next.begin(), next.end(), m.slice(k + 1).begin());
    }
    return m;
}

std::vector<KernelRow> transition_rows(std::span<const FlowPair> flow_pairs, const Grid& grid) {
    std::vector<KernelRow> rows(flow_pairs.size());
    for (std::size_t j = 0; j < flow_pairs.size(); ++j) {
        KernelRow& row = rows[j];
        const auto add = [&row](std::size_t to, double p) {
            if (p == 0.0) return;
            for (std::size_t e = 0; e < row.size; ++e) {
                if (row.to[e] == to) {
                    row.prob[e] += p;
                    return;
                }
            }
            row.to[row.size] = to;
            row.prob[row.size] = p;
            ++row.size;
        };
        for (double image : {flow_pairs[j].plus, flow_pairs[j].minus}) {
            const auto w = barycentric_weights(grid, image);
            add(w.left, 0.5 * w.w_left);
            add(w.left + 1, 0.5 * w.w_right);
        }
        double sum = 0.0;
        for (std::size_t e = 0; e < row.size; ++e) {
            if (row.prob[e] < 0.0 || row.prob[e] > 1.0) {
                throw SolverError("transition row " + std::to_string(j) +
                                  " has an entry outside [0,1]");
            }
            sum += row.prob[e];
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw SolverError("transition row " + std::to_string(j) + " is not stochastic");
        }
    }
    return rows;
}

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

DensityField simulate_chain(const DriftField& drift, const MfgProblem& problem, const Grid& grid,
                            std::size_t num_samples, std::uint64_t seed) {
    if (num_samples < 1) {
        throw SolverError("simulate_chain: need at least one sample");
    }
    const std::size_t n = grid.num_nodes();
    const std::size_t steps = grid.num_steps();
    const auto p0 = initial_density(problem.initial_density, grid);
    std::vector<double> cdf0(n);
    std::partial_sum(p0.begin(), p0.end(), cdf0.begin());

    std::vector<std::vector<KernelRow>> kernels;
    kernels.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        kernels.push_back(
            transition_rows(flows(drift.slice(k), problem.sigma(grid.time(k)), grid), grid));
    }

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> counts(n * (steps + 1), 0);
    for (std::size_t s = 0; s < num_samples; ++s) {
        const double u0 = uniform01(rng) * cdf0.back();
        auto state = static_cast<std::size_t>(
            std::upper_bound(cdf0.begin(), cdf0.end(), u0) - cdf0.begin());
        if (state >= n) state = n - 1;
        ++counts[state];
        for (std::size_t k = 0; k < steps; ++k) {
            const KernelRow& row = kernels[k][state];
            const double u = uniform01(rng);
            double acc = 0.0;
            std::size_t pick = row.to[row.size - 1];
            for (std::size_t e = 0; e < row.size; ++e) {
                acc += row.prob[e];
                if (u < acc) {
                    pick = row.to[e];
                    break;
                }
            }
            state = pick;
            ++counts[(k + 1) * n + state];
        }
    }
    DensityField empirical(n, steps + 1);
    const auto total = static_cast<double>(num_samples);
    for (std::size_t k = 0; k <= steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            empirical(i, k) = static_cast<double>(counts[k * n + i]) / total;
        }
    }
    return empirical;
}

CellReconstruction::CellReconstruction(const Grid& grid, NodeFunction cell_mass)
    : grid_(&grid), mass_(std::move(cell_mass)) {}

double CellReconstruction::operator()(double x) const {
    const double lo = grid_->x_min() - 0.5 * grid_->rho();
    const double hi = grid_->x_max() + 0.5 * grid_->rho();
    if (x < lo || x > hi) return 0.0;
    auto i = static_cast<std::size_t>(std::floor((x - lo) / grid_->rho()));
    if (i >= mass_.size()) i = mass_.size() - 1;
    return mass_[i] / grid_->rho();
}

double CellReconstruction::total_mass() const {
    return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

CellReconstruction reconstruct_continuous(const DensityField& m, const Grid& grid, double t) {
    if (!(t >= 0.0 && t <= grid.T())) {
        throw SolverError("reconstruct_continuous: t outside [0, T]");
    }
    auto k = static_cast<std::size_t>(std::floor(t / grid.h()));
    if (k >= grid.num_steps()) k = grid.num_steps() - 1;
    const double theta = std::clamp((t - grid.time(k)) / grid.h(), 0.0, 1.0);
    NodeFunction mass(grid.num_nodes());
    for (std::size_t i = 0; i < mass.size(); ++i) {
        mass[i] = (1.0 - theta) * m(i, k) + theta * m(i, k + 1);
    }
    return CellReconstruction(grid, std::move(mass));
}

}  // namespace slmfg
