#include "slmfg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "slmfg/metrics.hpp"

namespace slmfg {

double max_mass_deviation(const DensityField& m) {
    double worst = 0.0;
    for (std::size_t k = 0; k < m.num_slices(); ++k) {
        const auto s = m.slice(k);
        worst = std::max(worst, std::abs(std::accumulate(s.begin(), s.end(), 0.0) - 1.0));
    }
    return worst;
}

double min_weight(const DensityField& m) {
    return *std::min_element(m.data().begin(), m.data().end());
}

double max_density(const DensityField& m, double rho) {
    return *std::max_element(m.data().begin(), m.data().end()) / rho;
}

double semiconcavity_constant(const ValueField& v, const Grid& grid,
                              std::span<const std::size_t> offsets) {
    double worst = -std::numeric_limits<double>::infinity();
    const std::size_t n = v.num_nodes();
    for (std::size_t k = 0; k < v.num_slices(); ++k) {
        const auto s = v.slice(k);
        for (std::size_t j : offsets) {
            const double scale = static_cast<double>(j) * grid.rho();
            for (std::size_t i = j; i + j < n; ++i) {
                worst = std::max(worst, (s[i + j] - 2.0 * s[i] + s[i - j]) / (scale * scale));
            }
        }
    }
    return worst;
}

double one_sided_lipschitz(std::span<const double> drift, double rho) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < drift.size(); ++i) {
        worst = std::max(worst, (drift[i + 1] - drift[i]) / rho);
    }
    return worst;
}

double max_column_sum(std::span<const FlowPair> flow_pairs, const Grid& grid) {
    std::vector<double> column(grid.num_nodes(), 0.0);
    for (const auto& pair : flow_pairs) {
        for (double image : {pair.plus, pair.minus}) {
            const auto w = barycentric_weights(grid, image);
            column[w.left] += 0.5 * w.w_left;
            column[w.left + 1] += 0.5 * w.w_right;
        }
    }
    return *std::max_element(column.begin(), column.end());
}

double min_flow_separation(std::span<const double> drift_k, const Grid& grid) {
    const double h = grid.h();
    const double rho = grid.rho();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < drift_k.size(); ++i) {
        const double gap = (grid.node(i + 1) - h * drift_k[i + 1]) - (grid.node(i) - h * drift_k[i]);
        worst = std::min(worst, gap * gap / (rho * rho));
    }
    return worst;
}

double holder_constant(const DensityField& m, const Grid& grid) {
    double worst = 0.0;
    for (std::size_t k = 1; k < m.num_slices(); ++k) {
        for (std::size_t kp = 0; kp < k; ++kp) {
            const double d = wasserstein1_1d(m.slice(k), m.slice(kp), grid.rho());
            worst = std::max(worst, d / std::sqrt(grid.time(k) - grid.time(kp)));
        }
    }
    return worst;
}

double comb_vs_cell_distance(std::span<const double> m, const Grid& grid) {
    // On E_i the cell CDF ramps linearly across the cell while the comb CDF
    // jumps at x_i; each half cell contributes m_i rho / 8.
    double total = 0.0;
    for (double w : m) total += w * grid.rho() / 4.0;
    return total;
}

std::vector<SliceMoments> slice_moments(const DensityField& m, const Grid& grid) {
    std::vector<SliceMoments> out(m.num_slices());
    for (std::size_t k = 0; k < m.num_slices(); ++k) {
        const double mean = first_moment(m.slice(k), grid);
        const auto s = m.slice(k);
        double var = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double d = grid.node(i) - mean;
            var += s[i] * d * d;
        }
        out[k] = {mean, std::sqrt(var), second_moment(s, grid)};
    }
    return out;
}

}  // namespace slmfg
