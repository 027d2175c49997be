#include "slmfg/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "slmfg/error.hpp"

namespace slmfg {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "test",         "rho",          "h",           "eps",           "delta",
        "interaction",  "tau",          "max_iters",   "damping",       "error_scale",
        "out",          "seed",         "samples",     "workers",       "emit_density",
        "emit_value",   "emit_drift",   "emit_errors", "emit_moments",
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const KeyValues& kv, const std::string& key) {
    const auto& text = kv.at(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw SolverError("config: key '" + key + "' expects a number, got '" + text + "'");
    }
}

long long to_integer(const KeyValues& kv, const std::string& key) {
    const auto& text = kv.at(key);
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw SolverError("config: key '" + key + "' expects an integer, got '" + text + "'");
    }
}

bool to_bool(const KeyValues& kv, const std::string& key) {
    const auto& text = kv.at(key);
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw SolverError("config: key '" + key + "' expects true/false, got '" + text + "'");
}

int parse_test_id(const std::string& text) {
    std::string t = text;
    if (t.rfind("test", 0) == 0) t = t.substr(4);
    if (t == "1" || t == "2" || t == "3") return std::stoi(t);
    throw SolverError("config: key 'test' must be 1, 2, 3 (or test1..test3), got '" + text + "'");
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw SolverError("config: key '" + key + "' must be positive");
    }
}

}  // namespace

double RunConfig::effective_epsilon(double grid_h) const {
    return epsilon ? *epsilon : 2.0 * std::sqrt(grid_h);
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw SolverError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw SolverError("config line " + std::to_string(lineno) + ": empty key or value");
        }
        kv[key] = value;
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw SolverError("cannot open config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str());
}

KeyValues preset(int test_id) {
    switch (test_id) {
        case 1:
            return {{"rho", "3.12e-3"}, {"h", "3.12e-3"}, {"eps", "0.15"}, {"tau", "1e-3"}};
        case 2:
        case 3:
            return {{"rho", "6.35e-3"}, {"h", "6.35e-3"}, {"tau", "1e-3"}};
        default:
            throw SolverError("config: no preset for test " + std::to_string(test_id));
    }
}

RunConfig resolve_config(const KeyValues& kv) {
    std::string unknown;
    for (const auto& [key, value] : kv) {
        if (!known_keys().contains(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) {
        throw SolverError("config: unknown keys: " + unknown);
    }
    if (!kv.contains("test")) {
        throw SolverError("config: missing required keys: test");
    }

    RunConfig cfg;
    cfg.test_id = parse_test_id(kv.at("test"));
    KeyValues merged = preset(cfg.test_id);
    for (const auto& [key, value] : kv) merged[key] = value;

    cfg.rho = to_double(merged, "rho");
    cfg.h = to_double(merged, "h");
    require_positive(cfg.rho, "rho");
    require_positive(cfg.h, "h");
    if (merged.contains("eps")) {
        cfg.epsilon = to_double(merged, "eps");
        require_positive(*cfg.epsilon, "eps");
    }
    if (merged.contains("delta")) cfg.delta = to_double(merged, "delta");
    require_positive(cfg.delta, "delta");
    if (merged.contains("interaction")) {
        const auto& s = merged.at("interaction");
        if (s == "literal") {
            cfg.interaction = InteractionScaling::literal;
        } else if (s == "normalized") {
            cfg.interaction = InteractionScaling::normalized;
        } else {
            throw SolverError("config: key 'interaction' must be literal or normalized");
        }
    }
    if (merged.contains("tau")) cfg.tau = to_double(merged, "tau");
    require_positive(cfg.tau, "tau");
    if (merged.contains("max_iters")) {
        const auto v = to_integer(merged, "max_iters");
        if (v < 1) throw SolverError("config: key 'max_iters' must be >= 1");
        cfg.max_iters = static_cast<std::size_t>(v);
    }
    if (merged.contains("damping")) cfg.damping = to_double(merged, "damping");
    if (!(cfg.damping >= 0.0 && cfg.damping < 1.0)) {
        throw SolverError("config: key 'damping' must lie in [0, 1)");
    }
    if (merged.contains("error_scale")) {
        const auto& s = merged.at("error_scale");
        if (s != "weights" && s != "density") {
            throw SolverError("config: key 'error_scale' must be weights or density");
        }
        cfg.density_scaled_errors = s == "density";
    }
    if (merged.contains("out")) cfg.out_dir = merged.at("out");
    if (merged.contains("seed")) {
        const auto v = to_integer(merged, "seed");
        if (v < 0) throw SolverError("config: key 'seed' must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(v);
    }
    if (merged.contains("samples")) {
        const auto v = to_integer(merged, "samples");
        if (v < 1) throw SolverError("config: key 'samples' must be >= 1");
        cfg.samples = static_cast<std::size_t>(v);
    }
    if (merged.contains("workers")) {
        const auto v = to_integer(merged, "workers");
        if (v < 1) throw SolverError("config: key 'workers' must be >= 1");
        cfg.workers = static_cast<std::size_t>(v);
    }
    if (merged.contains("emit_density")) cfg.emit_density = to_bool(merged, "emit_density");
    if (merged.contains("emit_value")) cfg.emit_value = to_bool(merged, "emit_value");
    if (merged.contains("emit_drift")) cfg.emit_drift = to_bool(merged, "emit_drift");
    if (merged.contains("emit_errors")) cfg.emit_errors = to_bool(merged, "emit_errors");
    if (merged.contains("emit_moments")) cfg.emit_moments = to_bool(merged, "emit_moments");

    if (cfg.effective_epsilon(cfg.h) < 2.0 * cfg.rho) {
        throw SolverError("config: key 'eps' must be >= 2 rho (mollifier under-resolved)");
    }
    return cfg;
}

}  // namespace slmfg
