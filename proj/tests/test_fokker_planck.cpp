#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "slmfg/error.hpp"
#include "slmfg/fokker_planck.hpp"
#include "slmfg/metrics.hpp"

using namespace slmfg;

namespace {

double total(std::span<const double> m) {
    double s = 0.0;
    for (double x : m) s += x;
    return s;
}

MfgProblem small_problem(double sigma) {
    MfgProblem p;
    p.name = "small";
    p.running_cost = [](double, double) { return 0.0; };
    p.terminal_cost = [](double, std::span<const double>) { return 0.0; };
    p.sigma = [sigma](double) { return sigma; };
    p.initial_density = [](double x) { return 1.0 + 0.8 * std::sin(5.0 * x); };
    p.interaction_weight = 0.0;
    p.T = 0.25;
    return p;
}

DriftField smooth_drift(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-3.0, 3.0), freq(1.0, 6.0), phase(0.0, 6.3);
    DriftField d(g.num_nodes(), g.num_steps() + 1);
    for (std::size_t k = 0; k <= g.num_steps(); ++k) {
        const double a = amp(rng), b = freq(rng), c = phase(rng);
        for (std::size_t i = 0; i < g.num_nodes(); ++i) d(i, k) = a * std::sin(b * g.node(i) + c);
    }
    return d;
}

}  // namespace

TEST_CASE("initial density examples") {
    const auto g = Grid::uniform(0.0, 1.0, 11, 1.0, 10);  // cells of width 0.1 centred on nodes
    SUBCASE("uniform on aligned cells") {
        const auto m = initial_density([](double x) { return x >= 0.25 && x < 0.55 ? 1.0 : 0.0; }, g);
        CHECK(m[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(m[4] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(m[5] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(m[2] == 0.0);
        CHECK(m[6] == 0.0);
    }
    SUBCASE("concentrated in one cell") {
        const auto m = initial_density([](double x) { return std::abs(x - 0.7) < 0.03 ? 5.0 : 0.0; }, g);
        CHECK(m[7] == 1.0);
        CHECK(total(m) == 1.0);
    }
    SUBCASE("benchmark bump is symmetric") {
        const auto fine = Grid::from_spacing(0.0, 1.0, 3.125e-3, 2.0, 0.01);
        const auto m = initial_density(test_problem(1).initial_density, fine);
        const std::size_t n = m.size();
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(m[i] - m[n - 1 - i]) <= 1e-10);
        CHECK(std::abs(total(m) - 1.0) <= 1e-14);
    }
    SUBCASE("no support") {
        CHECK_THROWS_WITH_AS(initial_density([](double) { return 0.0; }, g),
                             doctest::Contains("m0 not supported in domain"), SolverError);
    }
}

TEST_CASE("flow examples") {
    const auto g = Grid::uniform(0.0, 1.0, 101, 1.0, 100);  // h = rho = 0.01
    NodeFunction zero(g.num_nodes(), 0.0);
    std::size_t clamped = 0;
    const auto still = flows(zero, 0.0, g, &clamped);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        CHECK(still[i].plus == g.node(i));
        CHECK(still[i].minus == g.node(i));
    }
    CHECK(clamped == 0);
    const auto spread = flows(zero, 0.2, g);
    CHECK(spread[50].plus == doctest::Approx(0.52).epsilon(1e-14));
    CHECK(spread[50].minus == doctest::Approx(0.48).epsilon(1e-14));
    const auto wide = flows(zero, 0.15, g, &clamped);
    CHECK(wide[0].minus == 0.0);
    CHECK(wide[1].minus == 0.0);
    CHECK(wide[100].plus == 1.0);
    CHECK(clamped == 4);  // nodes 0, 1, 99, 100 each lose one image
    const auto shifted = flows(NodeFunction(g.num_nodes(), 1.0), 0.0, g);
    for (std::size_t i = 1; i < g.num_nodes(); ++i) {
        CHECK(shifted[i].plus == doctest::Approx(g.node(i - 1)).epsilon(1e-14));
    }
}

TEST_CASE("push-forward examples") {
    const auto g = Grid::uniform(0.0, 1.0, 11, 1.0, 10);
    NodeFunction m(11, 0.0);
    m[5] = 1.0;
    std::vector<FlowPair> identity(11);
    for (std::size_t i = 0; i < 11; ++i) identity[i] = {g.node(i), g.node(i)};
    CHECK(push_forward(m, identity, g) == m);

    std::vector<FlowPair> half(11);
    for (std::size_t i = 0; i < 11; ++i) {
        half[i] = {g.node(i) + 0.5 * g.rho(), g.node(i) - 0.5 * g.rho()};
    }
    const auto split = push_forward(m, half, g);
    CHECK(split[4] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(split[5] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(split[6] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("push-forward matches the dense transition matrix") {
    std::mt19937_64 rng(77);
    const auto p = small_problem(0.4);
    const auto g = Grid::uniform(0.0, 1.0, 20, p.T, 5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto drift = smooth_drift(g, rng);
        auto m = oracle::random_measure(rng, 20, 20);
        std::vector<double> dense_m = m;
        const auto path = solve_forward(m, drift, p.sigma, g);
        for (std::size_t k = 0; k < g.num_steps(); ++k) {
            std::vector<double> plus(20), minus(20), nodes(20);
            for (std::size_t i = 0; i < 20; ++i) {
                nodes[i] = g.node(i);
                const double base = g.node(i) - g.h() * drift(i, k);
                plus[i] = base + std::sqrt(g.h()) * 0.4;
                minus[i] = base - std::sqrt(g.h()) * 0.4;
            }
            dense_m = oracle::apply_transpose(oracle::dense_kernel(nodes, plus, minus), dense_m);
            for (std::size_t i = 0; i < 20; ++i) {
                CHECK(std::abs(path(i, k + 1) - dense_m[i]) <= 1e-13);
            }
        }
    }
}

TEST_CASE("conservation, nonnegativity and worker independence") {
    std::mt19937_64 rng(8);
    const auto g = Grid::uniform(0.0, 1.0, 201, 1.0, 100);
    const auto drift = smooth_drift(g, rng);
    const auto m0 = initial_density(test_problem(2).initial_density, g);
    const auto sigma = [](double t) { return 0.3 * t; };
    std::size_t c1 = 0, c4 = 0;
    const auto a = solve_forward(m0, drift, sigma, g, &c1, 1);
    const auto b = solve_forward(m0, drift, sigma, g, &c4, 4);
    CHECK(c1 == c4);
    for (std::size_t k = 0; k <= g.num_steps(); ++k) {
        CHECK(std::abs(total(a.slice(k)) - 1.0) <= 1e-12);
        CHECK(std::abs(total(b.slice(k)) - 1.0) <= 1e-12);
        for (double x : a.slice(k)) CHECK(x >= 0.0);
        CHECK(wasserstein1_1d(a.slice(k), b.slice(k), g.rho()) <= 1e-13);
    }
    CHECK(a == solve_forward(m0, drift, sigma, g, nullptr, 1));
    CHECK(b == solve_forward(m0, drift, sigma, g, nullptr, 4));
}

TEST_CASE("transition rows are stochastic and sparse") {
    std::mt19937_64 rng(12);
    const auto g = Grid::uniform(0.0, 1.0, 30, 1.0, 10);
    const auto drift = smooth_drift(g, rng);
    const auto pairs = flows(drift.slice(3), 0.5, g);
    for (const auto& row : transition_rows(pairs, g)) {
        CHECK(row.size >= 1);
        CHECK(row.size <= 4);
        double sum = 0.0;
        for (std::size_t e = 0; e < row.size; ++e) {
            CHECK(row.prob[e] > 0.0);
            CHECK(row.prob[e] <= 1.0);
            sum += row.prob[e];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("Markov chain simulation") {
    SUBCASE("deterministic kernel keeps every path in place") {
        auto p = small_problem(0.0);
        p.initial_density = [](double x) { return std::abs(x - 0.5) < 0.02 ? 1.0 : 0.0; };
        const auto g = Grid::uniform(0.0, 1.0, 21, p.T, 5);
        const DriftField zero(21, 6, 0.0);
        const auto emp = simulate_chain(zero, p, g, 1000, 1);
        for (std::size_t k = 0; k <= 5; ++k) CHECK(emp(10, k) == 1.0);
    }
    SUBCASE("empirical laws approach the push-forward and are reproducible") {
        std::mt19937_64 rng(31);
        const auto p = small_problem(0.4);
        const auto g = Grid::uniform(0.0, 1.0, 20, p.T, 5);
        const auto drift = smooth_drift(g, rng);
        const auto m0 = initial_density(p.initial_density, g);
        const auto exact = solve_forward(m0, drift, p.sigma, g);
        const auto emp = simulate_chain(drift, p, g, 100000, 42);
        for (std::size_t k = 0; k <= g.num_steps(); ++k) {
            CHECK(wasserstein1_1d(exact.slice(k), emp.slice(k), g.rho()) <= 6e-3);
        }
        CHECK(emp == simulate_chain(drift, p, g, 100000, 42));
        CHECK_FALSE(emp == simulate_chain(drift, p, g, 100000, 43));
        CHECK_THROWS_AS(simulate_chain(drift, p, g, 0, 1), SolverError);
    }
}

TEST_CASE("continuous reconstruction") {
    const auto g = Grid::uniform(0.0, 1.0, 11, 1.0, 4);
    DensityField m(11, 5, 0.0);
    for (std::size_t k = 0; k < 5; ++k) m(k + 2, k) = 1.0;
    const auto at_node = reconstruct_continuous(m, g, g.time(2));
    CHECK(at_node.cell_mass()[4] == 1.0);
    CHECK(at_node(g.node(4)) == doctest::Approx(1.0 / g.rho()));
    CHECK(at_node(g.node(5)) == 0.0);
    const auto mid = reconstruct_continuous(m, g, 0.5 * (g.time(1) + g.time(2)));
    CHECK(mid.cell_mass()[3] == doctest::Approx(0.5));
    CHECK(mid.cell_mass()[4] == doctest::Approx(0.5));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        const auto r = reconstruct_continuous(m, g, u(rng));
        CHECK(r.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
        double integral = 0.0;
        const int q = 2200;
        for (int j = 0; j < q; ++j) integral += r(-0.05 + (j + 0.5) * 1.1 / q) * 1.1 / q;
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(reconstruct_continuous(m, g, 1.5), SolverError);
    CHECK_THROWS_AS(reconstruct_continuous(m, g, -0.1), SolverError);
}
