#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "slmfg/grid.hpp"
#include "slmfg/problem.hpp"

namespace slmfg {

/// Images x_i - h Dv(x_i, t_k) +/- sqrt(h) sigma(t_k) of one node, after
/// projection onto [x_min, x_max].
struct FlowPair {
    double plus;
    double minus;
};

/// m_{i,0} = integral of m0 over E_i, renormalised to unit total mass.
NodeFunction initial_density(const std::function<double(double)>& m0, const Grid& grid,
                             std::size_t quad_points = 16);

/// Flow images for slice k. `clamped`, when given, is incremented once for
/// every image that had to be projected back into the domain.
std::vector<FlowPair> flows(std::span<const double> drift_k, double sigma_k, const Grid& grid,
                            std::size_t* clamped = nullptr);

/// m_{i,k+1} = 1/2 sum_j [beta_i(Phi+_j) + beta_i(Phi-_j)] m_{j,k}.
///
/// With several workers each one scatters a contiguous block of sources into
/// its own buffer and the buffers are added in worker order.
NodeFunction push_forward(std::span<const double> m_k, std::span<const FlowPair> flow_pairs,
                          const Grid& grid, std::size_t workers = 1);

/// Runs the push-forward from `m0` through every slice of `drift`. `clamped`
/// counts flow images of nodes with positive mass that left the domain.
DensityField solve_forward(std::span<const double> m0, const DriftField& drift,
                           const std::function<double(double)>& sigma, const Grid& grid,
                           std::size_t* clamped = nullptr, std::size_t workers = 1);

/// Row j of the Markov transition matrix p^{(k)}_{j,.}: at most four
/// destinations (two flows times two barycentric weights), merged when they
/// coincide.
struct KernelRow {
    std::size_t size = 0;
    std::array<std::size_t, 4> to{};
    std::array<double, 4> prob{};
};

/// Sparse transition rows for one step; throws if a row is not stochastic.
std::vector<KernelRow> transition_rows(std::span<const FlowPair> flow_pairs, const Grid& grid);

/// Monte-Carlo simulation of the Markov chain whose law is the discrete
/// density: initial nodes drawn from the initial cell masses, transitions from
/// the kernel rows. Returns per-step occupation frequencies. Reproducible for
/// a given seed.
DensityField simulate_chain(const DriftField& drift, const MfgProblem& problem, const Grid& grid,
                            std::size_t num_samples, std::uint64_t seed);

/// Piecewise-constant-in-space, linear-in-time density reconstruction.
class CellReconstruction {
public:
    CellReconstruction(const Grid& grid, NodeFunction cell_mass);

    /// density at x (m_i / rho on E_i, zero outside the cells)
    double operator()(double x) const;
    /// m_i(t) = mass of cell E_i
    const NodeFunction& cell_mass() const { return mass_; }
    double total_mass() const;

private:
    const Grid* grid_;
    NodeFunction mass_;
};

CellReconstruction reconstruct_continuous(const DensityField& m, const Grid& grid, double t);

}  // namespace slmfg
