#pragma once

#include <cstddef>
#include <span>

#include "slmfg/grid.hpp"

namespace slmfg {

/// Fixed-point stopping errors of one iteration: sup-norm changes of the
/// value field and of the density field.
struct ErrorReport {
    std::size_t iteration = 0;
    double e_v = 0.0;
    double e_m = 0.0;
};

/// Wasserstein-1 distance between two probability vectors on the same
/// uniform grid, computed as rho * sum_i |F_mu(i) - F_nu(i)|.
double wasserstein1_1d(std::span<const double> mu, std::span<const double> nu, double rho);

double sup_norm_diff(std::span<const double> a, std::span<const double> b);
double sup_norm_diff(const SpaceTimeField& a, const SpaceTimeField& b);

/// sum_i m_i x_i^2 on the node masses. The cell-density second moment exceeds
/// this by rho^2 / 12.
double second_moment(std::span<const double> m, const Grid& grid);

double first_moment(std::span<const double> m, const Grid& grid);

}  // namespace slmfg
