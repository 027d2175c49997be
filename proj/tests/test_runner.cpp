#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "slmfg/error.hpp"
#include "slmfg/runner.hpp"

using namespace slmfg;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("slmfg_runner_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig small(int test, const std::filesystem::path& out) {
    auto cfg = resolve_config({{"test", std::to_string(test)}, {"rho", "0.025"}, {"h", "0.025"}});
    cfg.out_dir = out;
    return cfg;
}

}  // namespace

TEST_CASE("run writes the artifacts and a consistent summary") {
    const auto dir = scratch("artifacts");
    const auto cfg = small(1, dir);
    const auto outcome = run(cfg);
    CHECK(outcome.exit_code == exit_success);
    for (const char* name : {"density.csv", "value.csv", "errors.csv", "moments.csv", "summary.json"}) {
        CHECK(std::filesystem::exists(dir / name));
    }
    CHECK_FALSE(std::filesystem::exists(dir / "drift.csv"));

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["converged"] == true);
    CHECK(summary["iterations"] == outcome.solution.history.size());
    CHECK(summary["conservation_max_deviation"].get<double>() <= 1e-12);
    CHECK(summary["num_nodes"] == 41);
    CHECK(summary["num_steps"] == 80);
    CHECK(summary["second_moment"].size() == 81);
    CHECK(summary["linf_density"].get<double>() >= summary["linf_initial_density"].get<double>());

    std::istringstream errors(slurp(dir / "errors.csv"));
    std::string line;
    std::getline(errors, line);
    CHECK(line == "p,E_v,E_m");
    std::getline(errors, line);
    CHECK(line.rfind("1,inf,", 0) == 0);
}

TEST_CASE("density CSV round-trips at full precision") {
    const auto dir = scratch("roundtrip");
    const auto cfg = small(2, dir);
    const auto outcome = run(cfg);
    const auto& m = outcome.solution.m;
    const auto back = read_density_csv(dir / "density.csv", m.num_nodes(), m.num_slices());
    CHECK(back == m);
}

TEST_CASE("reruns are byte-identical") {
    const auto a = scratch("rerun_a"), b = scratch("rerun_b");
    auto cfg = small(3, a);
    cfg.emit_drift = true;
    run(cfg);
    cfg.out_dir = b;
    run(cfg);
    for (const char* name : {"density.csv", "value.csv", "drift.csv", "errors.csv", "moments.csv",
                             "summary.json"}) {
        CHECK(slurp(a / name) == slurp(b / name));
    }
}

TEST_CASE("non-convergence still writes artifacts with a distinct status") {
    const auto dir = scratch("not_converged");
    auto cfg = small(1, dir);
    cfg.max_iters = 1;
    const auto outcome = run(cfg);
    CHECK(outcome.exit_code == exit_not_converged);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["converged"] == false);
    CHECK(summary["final_e_v"].is_null());
}

TEST_CASE("I/O failures name the path") {
    const auto blocker = scratch("blocker");
    {
        std::ofstream f(blocker);
        f << "not a directory";
    }
    auto cfg = small(2, blocker / "sub");
    CHECK_THROWS_WITH_AS(run(cfg), doctest::Contains("slmfg_runner_blocker"), SolverError);
    std::filesystem::remove(blocker);
}

TEST_CASE("errors shrink by two orders of magnitude over ten iterations") {
    // coarsest refinement row of Test 1, iteration forced to run ten times
    const auto dir = scratch("ten_iterations");
    auto cfg = resolve_config({{"test", "1"}, {"rho", "1.25e-2"}, {"h", "1.25e-2"}, {"eps", "0.2"},
                               {"tau", "1e-300"}, {"max_iters", "10"}});
    cfg.out_dir = dir;
    const auto outcome = run(cfg);
    const auto& hist = outcome.solution.history;
    REQUIRE(hist.size() == 10);
    CHECK(hist[9].e_v <= 1e-2 * hist[1].e_v);
    CHECK(hist[9].e_m <= 1e-2 * hist[0].e_m);
}

TEST_CASE("validate and oracle drivers") {
    auto cfg = small(3, scratch("drivers"));
    std::ostringstream report;
    CHECK(validate(cfg, report) == exit_success);
    CHECK(report.str().find("PASS conservation") != std::string::npos);
    CHECK(report.str().find("FAIL") == std::string::npos);
    cfg.samples = 5000;
    std::ostringstream oracle_out;
    CHECK(oracle(cfg, oracle_out) == exit_success);
    CHECK(std::filesystem::exists(cfg.out_dir / "oracle.csv"));
}
