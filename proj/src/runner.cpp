#include "slmfg/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "slmfg/diagnostics.hpp"
#include "slmfg/error.hpp"
#include "slmfg/fokker_planck.hpp"
#include "slmfg/metrics.hpp"

namespace slmfg {

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SolverError("cannot write " + path.string());
    return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw SolverError("write failed for " + path.string());
}

}  // namespace

MfgProblem make_problem(const RunConfig& cfg) {
    MfgProblem p = test_problem(cfg.test_id);
    p.delta = cfg.delta;
    p.interaction_scaling = cfg.interaction;
    return p;
}

Grid make_grid(const RunConfig& cfg, const MfgProblem& problem) {
    return Grid::from_spacing(problem.x_min, problem.x_max, cfg.rho, problem.T, cfg.h);
}

void write_field_csv(const std::filesystem::path& path, const SpaceTimeField& field,
                     const Grid& grid, const char* value_name, bool with_density) {
    auto out = open_output(path);
    out << "k,t,i,x," << value_name;
    if (with_density) out << ",density";
    out << '\n';
    for (std::size_t k = 0; k < field.num_slices(); ++k) {
        const std::string t = num(grid.time(k));
        for (std::size_t i = 0; i < field.num_nodes(); ++i) {
            out << k << ',' << t << ',' << i << ',' << num(grid.node(i)) << ','
                << num(field(i, k));
            if (with_density) out << ',' << num(field(i, k) / grid.rho());
            out << '\n';
        }
    }
    check_written(out, path);
}

DensityField read_density_csv(const std::filesystem::path& path, std::size_t num_nodes,
                              std::size_t num_slices) {
    std::ifstream in(path);
    if (!in) throw SolverError("cannot open " + path.string());
    DensityField m(num_nodes, num_slices);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string k, t, i, x, w;
        std::getline(row, k, ',');
        std::getline(row, t, ',');
        std::getline(row, i, ',');
        std::getline(row, x, ',');
        std::getline(row, w, ',');
        const auto kk = std::stoul(k), ii = std::stoul(i);
        if (kk >= num_slices || ii >= num_nodes) {
            throw SolverError("density csv row out of range: " + line);
        }
        m(ii, kk) = std::stod(w);
    }
    return m;
}

RunOutcome run(const RunConfig& cfg, std::ostream* log) {
    const MfgProblem problem = make_problem(cfg);
    const Grid grid = make_grid(cfg, problem);
    const double eps = cfg.effective_epsilon(grid.h());

    FixedPointConfig fp;
    fp.tau = cfg.tau;
    fp.max_iters = cfg.max_iters;
    fp.damping = cfg.damping;
    fp.density_scaled_errors = cfg.density_scaled_errors;
    fp.workers = cfg.workers;
    const MinimizerConfig min_cfg;

    if (log != nullptr) {
        *log << problem.name << ": " << grid.num_nodes() << " nodes, " << grid.num_steps()
             << " steps, rho=" << num(grid.rho()) << " h=" << num(grid.h())
             << " eps=" << num(eps) << '\n';
    }
    RunOutcome outcome;
    outcome.solution = solve(problem, grid, eps, fp, min_cfg, [log](const ErrorReport& r) {
        if (log != nullptr) {
            *log << "iteration " << r.iteration << ": E(v)=" << num(r.e_v)
                 << " E(m)=" << num(r.e_m) << '\n';
        }
    });
    const MfgSolution& sol = outcome.solution;

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw SolverError("cannot create output directory " + cfg.out_dir.string());

    const auto emit = [&](const char* name) {
        const auto path = cfg.out_dir / name;
        outcome.files.push_back(path);
        return path;
    };
    if (cfg.emit_density) write_field_csv(emit("density.csv"), sol.m, grid, "m", true);
    if (cfg.emit_value) write_field_csv(emit("value.csv"), sol.v, grid, "v", false);
    if (cfg.emit_drift) write_field_csv(emit("drift.csv"), sol.drift, grid, "Dv_eps", false);
    if (cfg.emit_errors) {
        const auto path = emit("errors.csv");
        auto out = open_output(path);
        out << "p,E_v,E_m\n";
        for (const auto& r : sol.history) {
            out << r.iteration << ',' << num(r.e_v) << ',' << num(r.e_m) << '\n';
        }
        check_written(out, path);
    }
    const auto moments = slice_moments(sol.m, grid);
    if (cfg.emit_moments) {
        const auto path = emit("moments.csv");
        auto out = open_output(path);
        out << "k,t,mean,stddev,second_moment\n";
        for (std::size_t k = 0; k < moments.size(); ++k) {
            out << k << ',' << num(grid.time(k)) << ',' << num(moments[k].mean) << ','
                << num(moments[k].stddev) << ',' << num(moments[k].second) << '\n';
        }
        check_written(out, path);
    }

    nlohmann::ordered_json summary;
    summary["test"] = cfg.test_id;
    summary["num_nodes"] = grid.num_nodes();
    summary["num_steps"] = grid.num_steps();
    summary["rho"] = grid.rho();
    summary["h"] = grid.h();
    summary["epsilon"] = eps;
    summary["delta"] = cfg.delta;
    summary["interaction"] =
        cfg.interaction == InteractionScaling::literal ? "literal" : "normalized";
    summary["tau"] = cfg.tau;
    summary["converged"] = sol.converged;
    summary["iterations"] = sol.history.size();
    if (!sol.history.empty()) {
        const auto& last = sol.history.back();
        summary["final_e_v"] = std::isinf(last.e_v) ? nlohmann::ordered_json(nullptr)
                                                    : nlohmann::ordered_json(last.e_v);
        summary["final_e_m"] = last.e_m;
    }
    summary["conservation_max_deviation"] = max_mass_deviation(sol.m);
    summary["min_weight"] = min_weight(sol.m);
    summary["linf_density"] = max_density(sol.m, grid.rho());
    double initial_linf = 0.0;
    for (double w : sol.m.slice(0)) initial_linf = std::max(initial_linf, w / grid.rho());
    summary["linf_initial_density"] = initial_linf;
    summary["clamp_count"] = sol.clamp_count;
    std::vector<double> second;
    second.reserve(moments.size());
    for (const auto& mo : moments) second.push_back(mo.second);
    summary["second_moment"] = second;

    const auto path = emit("summary.json");
    auto out = open_output(path);
    out << summary.dump(2) << '\n';
    check_written(out, path);

    outcome.exit_code = sol.converged ? exit_success : exit_not_converged;
    if (log != nullptr) {
        *log << (sol.converged ? "converged" : "NOT converged") << " after "
             << sol.history.size() << " iterations; artifacts in " << cfg.out_dir.string()
             << '\n';
    }
    return outcome;
}

int validate(const RunConfig& cfg, std::ostream& out) {
    const MfgProblem problem = make_problem(cfg);
    const Grid grid = make_grid(cfg, problem);
    const double eps = cfg.effective_epsilon(grid.h());
    FixedPointConfig fp;
    fp.tau = cfg.tau;
    fp.max_iters = cfg.max_iters;
    fp.damping = cfg.damping;
    fp.workers = cfg.workers;
    const auto sol = solve(problem, grid, eps, fp, MinimizerConfig{});
    const auto& m = sol.m;
    const double rho = grid.rho();
    const double h = grid.h();
    const double T = grid.T();

    bool ok = true;
    const auto check = [&](const std::string& name, bool pass, const std::string& detail) {
        ok = ok && pass;
        out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    };
    const auto info = [&](const std::string& name, const std::string& detail) {
        out << "INFO " << name << ": " << detail << '\n';
    };

    const double dev = max_mass_deviation(m);
    check("conservation", dev <= 1e-12, "max |sum m - 1| = " + num(dev));
    const double lowest = min_weight(m);
    check("nonnegativity", lowest >= 0.0, "min m = " + num(lowest));

    double worst_comb = 0.0;
    for (std::size_t k = 0; k < m.num_slices(); ++k) {
        worst_comb = std::max(worst_comb, comb_vs_cell_distance(m.slice(k), grid));
    }
    check("node-vs-cell d1", worst_comb <= 0.5 * rho,
          num(worst_comb) + " <= rho/2 = " + num(0.5 * rho));

    bool stochastic = true;
    double growth = 1.0;
    double col_excess = 0.0;
    double sep_defect = 0.0;
    double osl = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.num_steps(); ++k) {
        const auto pairs = flows(sol.drift.slice(k), problem.sigma(grid.time(k)), grid);
        try {
            transition_rows(pairs, grid);
        } catch (const SolverError&) {
            stochastic = false;
        }
        const double col = max_column_sum(pairs, grid);
        growth *= std::max(col, 1.0);
        col_excess = std::max(col_excess, (col - 1.0) / h);
        sep_defect = std::max(sep_defect, (1.0 - min_flow_separation(sol.drift.slice(k), grid)) / h);
        osl = std::max(osl, one_sided_lipschitz(sol.drift.slice(k), rho));
    }
    check("kernel rows stochastic", stochastic, "all steps");
    double initial_linf = 0.0;
    for (double w : m.slice(0)) initial_linf = std::max(initial_linf, w / rho);
    const double linf = max_density(m, rho);
    check("L-infinity bound", linf <= initial_linf * growth * (1.0 + 1e-12),
          "max m/rho = " + num(linf) + " <= " + num(initial_linf * growth));
    info("column-sum constant", "max (colsum - 1)/h = " + num(col_excess));
    info("flow-separation constant", "max (1 - sep)/h = " + num(sep_defect));
    info("drift one-sided Lipschitz", num(osl));

    const std::size_t offsets[] = {1, 2, 4};
    info("semiconcavity constant", num(semiconcavity_constant(sol.v, grid, offsets)));
    info("time-Holder constant", num(holder_constant(m, grid)));
    const auto moments = slice_moments(m, grid);
    double a_max = 0.0;
    for (const auto& mo : moments) a_max = std::max(a_max, mo.second);
    info("second-moment constant",
         "max_k A_k e^-T - A_0 = " + num(a_max * std::exp(-T) - moments.front().second));
    info("fixed point", std::string(sol.converged ? "converged" : "not converged") + " in " +
                            std::to_string(sol.history.size()) + " iterations");
    return ok ? exit_success : exit_usage;
}

int oracle(const RunConfig& cfg, std::ostream& out) {
    const MfgProblem problem = make_problem(cfg);
    const Grid grid = make_grid(cfg, problem);
    const double eps = cfg.effective_epsilon(grid.h());
    FixedPointConfig fp;
    fp.tau = cfg.tau;
    fp.max_iters = cfg.max_iters;
    fp.damping = cfg.damping;
    fp.workers = cfg.workers;
    const auto sol = solve(problem, grid, eps, fp, MinimizerConfig{});
    const auto empirical = simulate_chain(sol.drift, problem, grid, cfg.samples, cfg.seed);

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    const auto path = cfg.out_dir / "oracle.csv";
    auto file = open_output(path);
    file << "k,t,d1\n";
    double worst = 0.0;
    for (std::size_t k = 0; k < sol.m.num_slices(); ++k) {
        const double d = wasserstein1_1d(empirical.slice(k), sol.m.slice(k), grid.rho());
        worst = std::max(worst, d);
        file << k << ',' << num(grid.time(k)) << ',' << num(d) << '\n';
    }
    check_written(file, path);
    out << "Markov-chain oracle: " << cfg.samples << " samples, seed " << cfg.seed
        << ", max_k d1(empirical, push-forward) = " << num(worst) << '\n';
    return exit_success;
}

}  // namespace slmfg
