#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slmfg/fokker_planck.hpp"
#include "slmfg/grid.hpp"

namespace slmfg {

// Fitted constants for the a-priori estimates of the discrete MFG system.
// They are reported by `slmfg validate` and checked in the test suites.

/// max_k |sum_i m_{i,k} - 1|
double max_mass_deviation(const DensityField& m);

double min_weight(const DensityField& m);

/// max over i, k of m_{i,k} / rho
double max_density(const DensityField& m, double rho);

/// max over slices, nodes and offsets j of (v_{i+j} - 2 v_i + v_{i-j}) / (j rho)^2
double semiconcavity_constant(const ValueField& v, const Grid& grid,
                              std::span<const std::size_t> offsets);

/// max_i (D_{i+1} - D_i) / rho: the one-sided Lipschitz constant of a drift
/// slice, equal to the max over all node pairs of
/// (D_j - D_i)(x_j - x_i) / (x_j - x_i)^2.
double one_sided_lipschitz(std::span<const double> drift, double rho);

/// max_i 1/2 sum_j [beta_i(Phi+_j) + beta_i(Phi-_j)]: the largest column sum
/// of the transition matrix.
double max_column_sum(std::span<const FlowPair> flow_pairs, const Grid& grid);

/// min over adjacent nodes of |Phi+_{i+1} - Phi+_i|^2 / rho^2 for unclamped
/// flows (the minus flow has the same increments).
double min_flow_separation(std::span<const double> drift_k, const Grid& grid);

/// max over step pairs k' < k of d1(m_k, m_k') / sqrt(t_k - t_k').
double holder_constant(const DensityField& m, const Grid& grid);

/// Exact Wasserstein-1 distance between the node (Dirac comb) measure
/// sum_i m_i delta_{x_i} and the cell-density measure with mass m_i spread
/// uniformly over E_i.
double comb_vs_cell_distance(std::span<const double> m, const Grid& grid);

struct SliceMoments {
    double mean;
    double stddev;
    double second;
};

std::vector<SliceMoments> slice_moments(const DensityField& m, const Grid& grid);

}  // namespace slmfg
