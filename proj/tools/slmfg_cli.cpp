// Command-line driver: `slmfg run|validate|oracle [flags]`.
//
// Exit codes: 0 success/converged, 2 not converged, 1 usage or I/O error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "slmfg/error.hpp"
#include "slmfg/run_config.hpp"
#include "slmfg/runner.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> test, rho, h, eps, delta, tau, max_iters, damping, out, seed,
        samples, workers, interaction;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "key = value configuration file");
    cmd->add_option("--test", f.test, "benchmark problem {1,2,3}");
    cmd->add_option("--rho", f.rho, "space step");
    cmd->add_option("--h", f.h, "time step");
    cmd->add_option("--eps", f.eps, "mollifier width (default 2 sqrt(h))");
    cmd->add_option("--delta", f.delta, "interaction kernel width");
    cmd->add_option("--interaction", f.interaction, "literal|normalized interaction kernel");
    cmd->add_option("--tau", f.tau, "fixed-point stopping threshold");
    cmd->add_option("--max-iters", f.max_iters, "fixed-point iteration cap");
    cmd->add_option("--damping", f.damping, "weight on the previous density iterate");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "Markov-chain sampler seed");
    cmd->add_option("--samples", f.samples, "Markov-chain sample count");
    cmd->add_option("--workers", f.workers, "threads per sweep");
}

slmfg::RunConfig build_config(const Flags& f) {
    slmfg::KeyValues kv;
    if (!f.config.empty()) kv = slmfg::read_key_values(f.config);
    const auto put = [&kv](const char* key, const std::optional<std::string>& v) {
        if (v) kv[key] = *v;
    };
    put("test", f.test);
    put("rho", f.rho);
    put("h", f.h);
    put("eps", f.eps);
    put("delta", f.delta);
    put("interaction", f.interaction);
    put("tau", f.tau);
    put("max_iters", f.max_iters);
    put("damping", f.damping);
    put("out", f.out);
    put("seed", f.seed);
    put("samples", f.samples);
    put("workers", f.workers);
    return slmfg::resolve_config(kv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-Lagrangian solver for degenerate second-order mean field games"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);
    Flags run_flags, validate_flags, oracle_flags;
    auto* run_cmd = app.add_subcommand("run", "solve a benchmark and write CSV artifacts");
    auto* validate_cmd = app.add_subcommand("validate", "solve and check discrete estimates");
    auto* oracle_cmd = app.add_subcommand("oracle", "Markov-chain Monte-Carlo comparison");
    add_flags(run_cmd, run_flags);
    add_flags(validate_cmd, validate_flags);
    add_flags(oracle_cmd, oracle_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? slmfg::exit_success : slmfg::exit_usage;
    }

    try {
        if (run_cmd->parsed()) {
            return slmfg::run(build_config(run_flags), &std::cout).exit_code;
        }
        if (validate_cmd->parsed()) {
            return slmfg::validate(build_config(validate_flags), std::cout);
        }
        return slmfg::oracle(build_config(oracle_flags), std::cout);
    } catch (const slmfg::SolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return slmfg::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return slmfg::exit_usage;
    }
}
