#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace slmfg {

using NodeFunction = std::vector<double>;

/// Uniform space grid x_i = x_min + i*rho on [x_min, x_max] paired with the
/// time grid t_k = k*h, k = 0..N, N*h = T.
class Grid {
public:
    /// Exact construction from node and step counts.
    static Grid uniform(double x_min, double x_max, std::size_t num_nodes, double T,
                        std::size_t num_steps);

    /// Construction from nominal spacings. The node count is
    /// round((x_max - x_min)/rho) + 1 and N = round(T/h); rho and h are then
    /// recomputed so that both lattices close exactly on their end points.
    static Grid from_spacing(double x_min, double x_max, double rho, double T, double h);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double rho() const { return rho_; }
    double h() const { return h_; }
    double T() const { return T_; }
    std::size_t num_nodes() const { return num_nodes_; }
    std::size_t num_steps() const { return num_steps_; }

    double node(std::size_t i) const;
    double time(std::size_t k) const;
    std::vector<double> nodes() const;

    /// Cell E_i = [x_i - rho/2, x_i + rho/2].
    struct Cell {
        double lo;
        double hi;
    };
    Cell cell(std::size_t i) const;

private:
    Grid(double x_min, double x_max, std::size_t num_nodes, double T, std::size_t num_steps);

    double x_min_;
    double x_max_;
    double rho_;
    double h_;
    double T_;
    std::size_t num_nodes_;
    std::size_t num_steps_;
};

/// P1 hat-function coordinates of x: only nodes `left` and `left + 1` carry
/// weight. Queries outside [x_min, x_max] are clamped to the nearest end node.
struct BarycentricWeights {
    std::size_t left;
    double w_left;
    double w_right;
};

BarycentricWeights barycentric_weights(const Grid& grid, double x);

/// I[f](x) = sum_i f_i beta_i(x).
double interpolate(const Grid& grid, std::span<const double> f, double x);

/// Composite midpoint rule for the integral of g over cell E_i.
double cell_integral(const Grid& grid, const std::function<double(double)>& g, std::size_t i,
                     std::size_t quad_points = 16);

/// Values v_{i,k} on the space-time lattice, stored slice by slice
/// (slice k holds all nodes at time t_k).
class SpaceTimeField {
public:
    SpaceTimeField() = default;
    SpaceTimeField(std::size_t num_nodes, std::size_t num_slices, double fill = 0.0)
        : num_nodes_(num_nodes), num_slices_(num_slices), data_(num_nodes * num_slices, fill) {}

    std::size_t num_nodes() const { return num_nodes_; }
    std::size_t num_slices() const { return num_slices_; }

    double& operator()(std::size_t i, std::size_t k) { return data_[k * num_nodes_ + i]; }
    double operator()(std::size_t i, std::size_t k) const { return data_[k * num_nodes_ + i]; }

    std::span<double> slice(std::size_t k) {
        return {data_.data() + k * num_nodes_, num_nodes_};
    }
    std::span<const double> slice(std::size_t k) const {
        return {data_.data() + k * num_nodes_, num_nodes_};
    }

    const std::vector<double>& data() const { return data_; }
    bool operator==(const SpaceTimeField&) const = default;

private:
    std::size_t num_nodes_ = 0;
    std::size_t num_slices_ = 0;
    std::vector<double> data_;
};

using ValueField = SpaceTimeField;
using DensityField = SpaceTimeField;
using DriftField = SpaceTimeField;

}  // namespace slmfg
