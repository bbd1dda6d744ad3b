#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../support.hpp"
#include "fvote/dynamics.hpp"
#include "fvote/error.hpp"
#include "fvote/experiments.hpp"
#include "fvote/generators.hpp"
#include "fvote/measures.hpp"

using namespace fvote;
using namespace fvote::testing;

namespace {

Graph gnp(std::size_t n, double p, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.n = n;
    spec.p = p;
    spec.seed = seed;
    return generate(spec);
}

} // namespace

TEST_CASE("exact moments by hand") {
    const Graph k3 = complete(3);
    const BetrayalSpec bo2 = BetrayalSpec::best_of(2);
    const Moments empty = exact_moments(Configuration::of(k3, VertexSet(3)), k3, bo2);
    CHECK(empty.mean == 0.0);
    CHECK(empty.variance == 0.0);
    // 1/3 - (1/3) f(1) + (2/3) f(1/2) with f(x) = x^2
    CHECK(exact_moments(Configuration::of(k3, set_of(3, {0})), k3, bo2).mean == doctest::Approx(1.0 / 6.0));

    const Graph k200 = complete(200, true);
    std::vector<Vertex> members(150);
    for (Vertex v = 0; v < 150; ++v) members[v] = v;
    const Configuration cfg = Configuration::of(k200, VertexSet::of(200, members));
    const Moments m = exact_moments(cfg, k200, bo2);
    CHECK(m.mean == doctest::Approx(0.84375).epsilon(1e-12));
    CHECK(m.mean == doctest::Approx(updating_function(bo2, 0.75)).epsilon(1e-12));
}

TEST_CASE("Monte Carlo mean agrees with the closed form") {
    SplitMix64 rng(5);
    for (const auto& f : {BetrayalSpec::best_of(3), BetrayalSpec::careful(2), BetrayalSpec::majority()}) {
        const Graph g = gnp(40, 0.2, rng());
        const Configuration cfg = Configuration::of(g, init_by_measure(g, 0.4, rng()));
        const Moments m = exact_moments(cfg, g, f);
        const int trials = 20000;
        long double sum = 0.0L;
        for (int t = 0; t < trials; ++t) sum += step(cfg, g, f, DrawStream{99, static_cast<std::uint64_t>(t)}).pi_a;
        const double mc = static_cast<double>(sum / trials);
        CHECK(std::abs(mc - m.mean) <= 5.0 * std::sqrt(m.variance / trials));
    }
}

TEST_CASE("consensus is absorbing") {
    const Graph g = gnp(60, 0.2, 3);
    const BetrayalSpec f = BetrayalSpec::best_of(3);
    const Configuration none = Configuration::of(g, VertexSet(g.n()));
    const Configuration all = Configuration::of(g, VertexSet::full(g.n()));
    for (std::uint64_t t = 0; t < 1000; ++t) {
        CHECK(step(none, g, f, DrawStream{7, t}).a.empty());
        CHECK(step(all, g, f, DrawStream{7, t}).a.is_full());
    }
}

TEST_CASE("complement coupling") {
    const Graph g = gnp(300, 0.05, 8);
    const BetrayalSpec f = BetrayalSpec::best_of(3);
    const VertexSet a = init_by_measure(g, 0.5, 4);
    const Trajectory fwd = run(g, f, a, 500, 77);
    const Trajectory rev = run(g, f, a.complement(), 500, 77);
    REQUIRE(fwd.steps.size() == rev.steps.size());
    for (std::size_t i = 0; i < fwd.steps.size(); ++i) {
        CHECK(fwd.steps[i].pi_a == doctest::Approx(1.0 - rev.steps[i].pi_a).epsilon(1e-12));
    }
    // Same check at the set level, step by step.
    Configuration x = Configuration::of(g, a);
    Configuration y = Configuration::of(g, a.complement());
    for (std::uint64_t t = 0; t < 10; ++t) {
        x = step(x, g, f, DrawStream{77, t});
        y = step(y, g, f, DrawStream{77, t});
        CHECK(x.a.complement() == y.a);
    }
}

TEST_CASE("engine matches the from-scratch step") {
    const Graph g = gnp(200, 0.08, 11);
    const BetrayalSpec f = BetrayalSpec::best_of(2);
    Configuration c = Configuration::of(g, init_by_measure(g, 0.5, 2));
    VotingEngine e(g, f, c.a);
    for (std::uint64_t t = 0; t < 150 && !c.consensus(); ++t) {
        c = step(c, g, f, DrawStream{5, t});
        e.advance(DrawStream{5, t});
        CHECK(e.set() == c.a);
        CHECK(e.pi_a() == c.pi_a);
    }
}

TEST_CASE("exchangeability on the complete graph with loops") {
    const std::size_t n = 24;
    const Graph g = complete(n, true);
    const BetrayalSpec f = BetrayalSpec::best_of(3);
    const Configuration a = Configuration::of(g, set_of(n, {0, 1, 2, 3, 4, 5, 6, 7, 8}));
    const Configuration b = Configuration::of(g, set_of(n, {3, 5, 7, 11, 13, 17, 19, 21, 23}));
    std::vector<double> sa, sb;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        sa.push_back(static_cast<double>(step(a, g, f, DrawStream{1, t}).a.size()));
        sb.push_back(static_cast<double>(step(b, g, f, DrawStream{2, t}).a.size()));
    }
    CHECK(ks_two_sample(sa, sb).p_value >= 1e-3);
}

TEST_CASE("run endpoints") {
    const Graph g = gnp(100, 0.1, 1);
    const BetrayalSpec f = BetrayalSpec::best_of(3);
    const Trajectory none = run(g, f, VertexSet(g.n()), 10, 1);
    CHECK(none.t_cons == 0u);
    CHECK(none.terminal == Terminal::Consensus1);
    const Trajectory all = run(g, f, VertexSet::full(g.n()), 10, 1);
    CHECK(all.t_cons == 0u);
    CHECK(all.terminal == Terminal::Consensus0);
    const Trajectory cut = run(g, f, init_by_measure(g, 0.5, 1), 1, 1);
    CHECK(cut.terminal == Terminal::Timeout);
    CHECK_FALSE(cut.t_cons.has_value());
    CHECK(cut.steps.size() == 2);
    CHECK_THROWS_AS(run(g, f, VertexSet(g.n()), 0, 1), InvalidParam);
    CHECK(default_max_steps(1024) == 500);
    CHECK(default_max_steps(1000) == 500);
}

TEST_CASE("best-of-three on G(1024, 0.2) reaches consensus") {
    const Graph g = gnp(1024, 0.2, 2024);
    const BetrayalSpec f = BetrayalSpec::best_of(3);
    std::vector<double> times;
    for (std::uint64_t r = 0; r < 100; ++r) {
        std::vector<Vertex> half(512);
        SplitMix64 rng(r);
        std::vector<Vertex> order(1024);
        for (Vertex v = 0; v < 1024; ++v) order[v] = v;
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        std::copy(order.begin(), order.begin() + 512, half.begin());
        const Trajectory t = run(g, f, VertexSet::of(1024, half), 200, derive_seed(9, r, 0));
        REQUIRE(t.t_cons.has_value());
        times.push_back(static_cast<double>(*t.t_cons));
    }
    const double median = quantile(times, 0.5);
    MESSAGE("median t_cons = " << median);
    CHECK(median <= 3.0 * std::log2(1024.0));
}

TEST_CASE("phase labels") {
    UpdatingProfile p = derive_profile(BetrayalSpec::best_of(3));
    SpectralSummary s;
    s.lambda = 0.05;
    const std::size_t n = 4096;
    const double norm2 = 1.0 / 64.0;
    CHECK(classify_phase(0.0, p, s, norm2, n) == Phase::I);
    CHECK(classify_phase(0.3, p, s, norm2, n) == Phase::III);
    CHECK(classify_phase(-0.3, p, s, norm2, n) == Phase::III);
    CHECK(classify_phase(1.0, p, s, norm2, n) == Phase::Consensus);
    CHECK(classify_phase(-1.0, p, s, norm2, n) == Phase::Consensus);
    // minority 0.01 <= eps_c / (8K) = 1/48
    CHECK(classify_phase(0.98, p, s, norm2, n) == Phase::IV);
    // minority 0.022: above 1/48, below 1/(7K) = 1/42, and H'(0) = 0
    CHECK(classify_phase(0.956, p, s, norm2, n) == Phase::V);
    // minority 0.05: below Phase III's floor 1/12, above Phase V's ceiling
    CHECK(classify_phase(0.9, p, s, norm2, n) == Phase::Other);

    // A tiny lambda and norm open a Phase II band below eps_h / K = 1/12.
    SpectralSummary sharp;
    sharp.lambda = 1e-3;
    CHECK(classify_phase(0.08, p, sharp, 1e-4, 1u << 30) == Phase::II);

    PhaseConfig cfg;
    cfg.c3 = 0.2;
    CHECK(classify_phase(0.3, p, s, norm2, n, cfg) == Phase::Other);

    const UpdatingProfile pull = derive_profile(BetrayalSpec::pull());
    CHECK_THROWS_AS(classify_phase(0.1, pull, s, norm2, n), Unclassifiable);
}

TEST_CASE("initial configurations") {
    const Graph g = gnp(500, 0.05, 6);
    const double pmax = *std::max_element(g.pi().pi.begin(), g.pi().pi.end());
    for (double target : {0.1, 0.5, 0.55}) {
        CHECK(std::abs(measure(g, init_by_measure(g, target, 3)) - target) <= pmax / 2 + 1e-12);
    }
    const VertexSet hd = init_high_degree(g);
    CHECK(measure(g, hd) >= 0.5);
    std::uint32_t min_in = ~0u, max_out = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (hd.contains(v)) min_in = std::min(min_in, g.degree(v));
        else max_out = std::max(max_out, g.degree(v));
    }
    CHECK(min_in >= max_out);
    const VertexSet ball = init_bfs_ball(g, 0);
    CHECK(ball.contains(0));
    CHECK(measure(g, ball) >= 0.5);
}
