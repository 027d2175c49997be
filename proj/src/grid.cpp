#include "slmfg/grid.hpp"

#include <cmath>
#include <string>

#include "slmfg/error.hpp"

namespace slmfg {

Grid::Grid(double x_min, double x_max, std::size_t num_nodes, double T, std::size_t num_steps)
    : x_min_(x_min),
      x_max_(x_max),
      rho_((x_max - x_min) / static_cast<double>(num_nodes - 1)),
      h_(T / static_cast<double>(num_steps)),
      T_(T),
      num_nodes_(num_nodes),
      num_steps_(num_steps) {}

Grid Grid::uniform(double x_min, double x_max, std::size_t num_nodes, double T,
                   std::size_t num_steps) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
        throw SolverError("grid: need finite x_min < x_max");
    }
    if (num_nodes < 3) {
        throw SolverError("grid: need at least 3 nodes");
    }
    if (!std::isfinite(T) || !(T > 0.0)) {
        throw SolverError("grid: horizon T must be positive");
    }
    if (num_steps < 1) {
        throw SolverError("grid: need at least one time step");
    }
    return Grid(x_min, x_max, num_nodes, T, num_steps);
}

Grid Grid::from_spacing(double x_min, double x_max, double rho, double T, double h) {
    if (!(rho > 0.0) || !(h > 0.0) || !std::isfinite(rho) || !std::isfinite(h)) {
        throw SolverError("grid: rho and h must be positive");
    }
    if (!(x_max > x_min)) {
        throw SolverError("grid: need x_min < x_max");
    }
    const auto cells = static_cast<std::size_t>(std::llround((x_max - x_min) / rho));
    const auto steps = static_cast<std::size_t>(std::llround(T / h));
    return uniform(x_min, x_max, cells + 1, T, steps < 1 ? 1 : steps);
}

double Grid::node(std::size_t i) const {
    if (i + 1 == num_nodes_) return x_max_;
    return x_min_ + static_cast<double>(i) * rho_;
}

double Grid::time(std::size_t k) const {
    if (k == num_steps_) return T_;
    return static_cast<double>(k) * h_;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(num_nodes_);
    for (std::size_t i = 0; i < num_nodes_; ++i) x[i] = node(i);
    return x;
}

Grid::Cell Grid::cell(std::size_t i) const {
    const double c = node(i);
    return {c - 0.5 * rho_, c + 0.5 * rho_};
}

BarycentricWeights barycentric_weights(const Grid& grid, double x) {
    if (std::isnan(x)) {
        throw SolverError("barycentric_weights: NaN coordinate");
    }
    const std::size_t last = grid.num_nodes() - 1;
    if (x <= grid.x_min()) return {0, 1.0, 0.0};
    if (x >= grid.x_max()) return {last - 1, 0.0, 1.0};

    auto j = static_cast<std::size_t>(std::floor((x - grid.x_min()) / grid.rho()));
    if (j >= last) j = last - 1;
    // floor() can land one cell off when x sits on a node up to rounding
    if (x < grid.node(j)) {
        if (j > 0) --j;
    } else if (j + 1 < last && x >= grid.node(j + 1)) {
        ++j;
    }
    double w_right = (x - grid.node(j)) / grid.rho();
    if (w_right < 0.0) w_right = 0.0;
    if (w_right > 1.0) w_right = 1.0;
    return {j, 1.0 - w_right, w_right};
}

double interpolate(const Grid& grid, std::span<const double> f, double x) {
    const auto w = barycentric_weights(grid, x);
    return w.w_left * f[w.left] + w.w_right * f[w.left + 1];
}

double cell_integral(const Grid& grid, const std::function<double(double)>& g, std::size_t i,
                     std::size_t quad_points) {
    if (quad_points < 1) {
        throw SolverError("cell_integral: quad_points must be >= 1");
    }
    const auto cell = grid.cell(i);
    const double dx = grid.rho() / static_cast<double>(quad_points);
    double sum = 0.0;
    for (std::size_t q = 0; q < quad_points; ++q) {
        const double value = g(cell.lo + (static_cast<double>(q) + 0.5) * dx);
        if (!std::isfinite(value)) {
            throw SolverError("cell_integral: non-finite integrand in cell " + std::to_string(i));
        }
        sum += value;
    }
    return sum * dx;
}

}  // namespace slmfg
