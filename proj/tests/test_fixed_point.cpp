#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "slmfg/diagnostics.hpp"
#include "slmfg/error.hpp"
#include "slmfg/fixed_point.hpp"

using namespace slmfg;

TEST_CASE("fixed-point configuration") {
    FixedPointConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.tau = 0.0;
    CHECK_THROWS_AS(cfg.validate(), SolverError);
    cfg = {};
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), SolverError);
    cfg = {};
    cfg.damping = 1.0;
    CHECK_THROWS_AS(cfg.validate(), SolverError);
    cfg.damping = -0.1;
    CHECK_THROWS_AS(cfg.validate(), SolverError);
}

TEST_CASE("uncoupled problem converges in exactly two iterations") {
    for (int id = 1; id <= 3; ++id) {
        auto p = test_problem(id);
        p.interaction_weight = 0.0;
        const auto g = Grid::from_spacing(p.x_min, p.x_max, 0.025, p.T, 0.025);
        const auto sol = solve(p, g, 0.15, FixedPointConfig{}, MinimizerConfig{});
        CHECK(sol.converged);
        REQUIRE(sol.history.size() == 2);
        CHECK(std::isinf(sol.history[0].e_v));
        CHECK(sol.history[1].e_v == 0.0);
        CHECK(sol.history[1].e_m <= 1e-14);
    }
}

TEST_CASE("coupled run: residual, conservation and determinism") {
    const auto p = test_problem(2);
    const auto g = Grid::from_spacing(p.x_min, p.x_max, 0.025, p.T, 0.025);
    const double eps = 2.0 * std::sqrt(g.h());
    FixedPointConfig cfg;
    std::vector<ErrorReport> seen;
    const auto sol = solve(p, g, eps, cfg, MinimizerConfig{},
                           [&](const ErrorReport& r) { seen.push_back(r); });
    REQUIRE(sol.converged);
    CHECK(seen.size() == sol.history.size());
    CHECK(sol.history.back().e_v <= cfg.tau);
    CHECK(sol.history.back().e_m <= cfg.tau);
    CHECK(max_mass_deviation(sol.m) <= 1e-12);
    CHECK(min_weight(sol.m) >= 0.0);

    // d1 between the fixed point and its image stays below width * tau
    const auto image = best_response(p, g, eps, sol.m, MinimizerConfig{});
    for (std::size_t k = 0; k <= g.num_steps(); ++k) {
        CHECK(wasserstein1_1d(sol.m.slice(k), image.m.slice(k), g.rho()) <=
              (p.x_max - p.x_min) * cfg.tau);
    }

    const auto again = solve(p, g, eps, cfg, MinimizerConfig{});
    CHECK(again.m == sol.m);
    CHECK(again.v == sol.v);
    FixedPointConfig parallel = cfg;
    parallel.workers = 3;
    const auto par = solve(p, g, eps, parallel, MinimizerConfig{});
    CHECK(par.history.size() == sol.history.size());
    CHECK(sup_norm_diff(par.m, sol.m) <= 1e-14);
}

TEST_CASE("non-convergence is reported, not thrown") {
    const auto p = test_problem(1);
    const auto g = Grid::from_spacing(p.x_min, p.x_max, 0.025, p.T, 0.025);
    FixedPointConfig cfg;
    cfg.max_iters = 1;
    const auto sol = solve(p, g, 0.15, cfg, MinimizerConfig{});
    CHECK_FALSE(sol.converged);
    CHECK(sol.history.size() == 1);
    CHECK(max_mass_deviation(sol.m) <= 1e-12);
}

TEST_CASE("damped iteration reaches the same fixed point") {
    const auto p = test_problem(3);
    const auto g = Grid::from_spacing(p.x_min, p.x_max, 0.025, p.T, 0.025);
    FixedPointConfig plain, damped;
    plain.tau = damped.tau = 1e-6;
    damped.damping = 0.4;
    const auto a = solve(p, g, 0.15, plain, MinimizerConfig{});
    const auto b = solve(p, g, 0.15, damped, MinimizerConfig{});
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(sup_norm_diff(a.m, b.m) <= 1e-4);
}

TEST_CASE("errors carry the iteration number") {
    auto p = test_problem(1);
    p.sigma = [](double t) { return t > 1.0 ? std::nan("") : 0.0; };
    const auto g = Grid::from_spacing(p.x_min, p.x_max, 0.05, p.T, 0.05);
    CHECK_THROWS_WITH_AS(solve(p, g, 0.15, FixedPointConfig{}, MinimizerConfig{}),
                         doctest::Contains("fixed point iteration 1:"), SolverError);
    CHECK_THROWS_AS(solve(test_problem(1), g, 0.05, FixedPointConfig{}, MinimizerConfig{}),
                    SolverError);  // under-resolved mollifier
}

TEST_CASE("uncoupled deterministic mean follows the linear-quadratic optimum") {
    auto p = test_problem(1);
    p.interaction_weight = 0.0;
    const auto target = [](double t) { return (1.0 - std::sin(2.0 * std::numbers::pi * t)) / 2.0; };
    const auto lq = oracle::lq_mean_path(5.0, target, p.T, 0.5, 6400);
    double errors[2];
    const double rhos[2] = {1.0 / 80.0, 1.0 / 160.0};
    for (int level = 0; level < 2; ++level) {
        const auto g = Grid::from_spacing(p.x_min, p.x_max, rhos[level], p.T, rhos[level]);
        const auto sol = solve(p, g, 0.15, FixedPointConfig{}, MinimizerConfig{});
        const auto moments = slice_moments(sol.m, g);
        double worst = 0.0;
        for (std::size_t k = 0; k <= g.num_steps(); ++k) {
            const std::size_t j = k * 6400 / g.num_steps();
            worst = std::max(worst, std::abs(moments[k].mean - lq[j]));
        }
        errors[level] = worst;
    }
    CHECK(errors[0] <= 0.02);
    CHECK(errors[1] / errors[0] <= 0.7);  // first-order convergence
}
