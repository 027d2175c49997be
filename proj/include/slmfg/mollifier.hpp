#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slmfg/grid.hpp"

namespace slmfg {

/// Truncated Gaussian smoothing kernel on grid offsets -half_width..half_width.
///
/// Standard deviation epsilon/2, cut at four standard deviations and
/// renormalised so the weights sum to one.
struct MollifierKernel {
    double epsilon = 0.0;
    std::size_t half_width = 0;
    std::vector<double> weights;  // weights[j + half_width] for offset j

    double weight(long offset) const {
        return weights[static_cast<std::size_t>(offset + static_cast<long>(half_width))];
    }
};

/// Requires epsilon >= 2 rho, otherwise the kernel is under-resolved.
MollifierKernel build_mollifier(double epsilon, const Grid& grid);

/// Discrete convolution with edge-value extension beyond the end nodes.
NodeFunction mollify_slice(std::span<const double> v, const MollifierKernel& kernel);

/// Central differences inside, one-sided differences at the two end nodes.
NodeFunction gradient(std::span<const double> v, const Grid& grid);

/// Dv^eps(x_i, t_k) for every slice of `v`.
DriftField mollified_gradient(const ValueField& v, const MollifierKernel& kernel,
                              const Grid& grid);

}  // namespace slmfg
