#include "slmfg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slmfg/error.hpp"

namespace slmfg {

double wasserstein1_1d(std::span<const double> mu, std::span<const double> nu, double rho) {
    if (mu.size() != nu.size()) {
        throw SolverError("wasserstein1_1d: measures live on different grids");
    }
    const double mass_mu = std::accumulate(mu.begin(), mu.end(), 0.0);
    const double mass_nu = std::accumulate(nu.begin(), nu.end(), 0.0);
    if (std::abs(mass_mu - 1.0) > 1e-9 || std::abs(mass_nu - 1.0) > 1e-9) {
        throw SolverError("wasserstein1_1d: inputs must be normalised probability vectors");
    }
    double cdf_gap = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
        cdf_gap += mu[i] - nu[i];
        total += std::abs(cdf_gap);
    }
    return rho * total;
}

double sup_norm_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw SolverError("sup_norm_diff: shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double sup_norm_diff(const SpaceTimeField& a, const SpaceTimeField& b) {
    if (a.num_nodes() != b.num_nodes() || a.num_slices() != b.num_slices()) {
        throw SolverError("sup_norm_diff: shape mismatch");
    }
    return sup_norm_diff(std::span<const double>(a.data()), std::span<const double>(b.data()));
}

double second_moment(std::span<const double> m, const Grid& grid) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double x = grid.node(i);
        acc += m[i] * x * x;
    }
    return acc;
}

double first_moment(std::span<const double> m, const Grid& grid) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) acc += m[i] * grid.node(i);
    return acc;
}

}  // namespace slmfg
