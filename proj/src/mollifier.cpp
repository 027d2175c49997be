#include "slmfg/mollifier.hpp"

#include <cmath>

#include "slmfg/error.hpp"

namespace slmfg {

MollifierKernel build_mollifier(double epsilon, const Grid& grid) {
    const double rho = grid.rho();
    // small relative slack so that epsilon = 2 rho computed in floating point passes
    if (!std::isfinite(epsilon) || epsilon < 2.0 * rho * (1.0 - 1e-12)) {
        throw SolverError("mollifier under-resolved: epsilon must be >= 2 rho");
    }
    const double sd = 0.5 * epsilon;
    MollifierKernel k;
    k.epsilon = epsilon;
    k.half_width = static_cast<std::size_t>(std::ceil(4.0 * sd / rho - 1e-9));
    const long hw = static_cast<long>(k.half_width);
    k.weights.resize(2 * k.half_width + 1);
    for (long j = -hw; j <= hw; ++j) {
        const double x = static_cast<double>(j) * rho;
        k.weights[static_cast<std::size_t>(j + hw)] = std::exp(-x * x / (2.0 * sd * sd));
    }
    // sum symmetric pairs from the tails inward so weight[-j] == weight[j]
    double total = k.weights[k.half_width];
    for (long j = hw; j >= 1; --j) total += 2.0 * k.weights[static_cast<std::size_t>(j + hw)];
    for (auto& w : k.weights) w /= total;
    return k;
}

NodeFunction mollify_slice(std::span<const double> v, const MollifierKernel& kernel) {
    const long n = static_cast<long>(v.size());
    const long hw = static_cast<long>(kernel.half_width);
    NodeFunction out(v.size());
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long j = -hw; j <= hw; ++j) {
            long src = i - j;
            if (src < 0) src = 0;
            if (src >= n) src = n - 1;
            acc += kernel.weight(j) * v[static_cast<std::size_t>(src)];
        }
        if (!std::isfinite(acc)) {
            throw SolverError("mollify_slice: non-finite value at node " + std::to_string(i));
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

NodeFunction gradient(std::span<const double> v, const Grid& grid) {
    const std::size_t n = v.size();
    if (n < 3) {
        throw SolverError("gradient: need at least 3 nodes");
    }
    const double rho = grid.rho();
    NodeFunction d(n);
    d[0] = (v[1] - v[0]) / rho;
    d[n - 1] = (v[n - 1] - v[n - 2]) / rho;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * rho);
    return d;
}

DriftField mollified_gradient(const ValueField& v, const MollifierKernel& kernel,
                              const Grid& grid) {
    DriftField drift(v.num_nodes(), v.num_slices());
    for (std::size_t k = 0; k < v.num_slices(); ++k) {
        const auto d = gradient(mollify_slice(v.slice(k), kernel), grid);
        std::copy(d.begin(), d.end(), drift.slice(k).begin());
    }
    return drift;
}

}  // namespace slmfg
