#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "slmfg/problem.hpp"

namespace slmfg {

/// Raw `key = value` pairs, later entries overriding earlier ones.
using KeyValues = std::map<std::string, std::string>;

/// Validated settings for one solver run.
///
/// `h` is rounded so that N = round(T/h) steps close exactly on T; the grid
/// reports the effective values.
struct RunConfig {
    int test_id = 0;
    double rho = 0.0;
    double h = 0.0;
    std::optional<double> epsilon;  // unset: 2 sqrt(h)
    double delta = 0.2;
    InteractionScaling interaction = InteractionScaling::literal;
    double tau = 1e-3;
    std::size_t max_iters = 50;
    double damping = 0.0;
    bool density_scaled_errors = false;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    std::size_t workers = 1;
    bool emit_density = true;
    bool emit_value = true;
    bool emit_drift = false;
    bool emit_errors = true;
    bool emit_moments = true;

    /// epsilon, or 2 sqrt(grid_h) when unset
    double effective_epsilon(double grid_h) const;
};

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
KeyValues parse_key_values(std::string_view text);

KeyValues read_key_values(const std::filesystem::path& path);

/// Fills preset defaults for the chosen test, applies the given keys and
/// validates. Unknown keys and missing `test` are errors naming the keys.
RunConfig resolve_config(const KeyValues& kv);

/// Benchmark parameters for test 1, 2 or 3.
KeyValues preset(int test_id);

}  // namespace slmfg
