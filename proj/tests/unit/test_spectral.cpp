#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "fvote/error.hpp"
#include "fvote/generators.hpp"
#include "fvote/spectral.hpp"

using namespace fvote;
using namespace fvote::testing;

namespace {

SpectralOptions with(SpectralMethod m) {
    SpectralOptions o;
    o.method = m;
    return o;
}

} // namespace

TEST_CASE("complete graph K5") {
    for (auto m : {SpectralMethod::Dense, SpectralMethod::Iterative}) {
        const SpectralSummary s = expansion(complete(5), with(m));
        CHECK(s.lambda == doctest::Approx(0.25).epsilon(1e-10));
        CHECK(s.lambda2 == doctest::Approx(-0.25).epsilon(1e-10));
        CHECK(s.lambda_n == doctest::Approx(-0.25).epsilon(1e-10));
    }
}

TEST_CASE("bipartite graphs have lambda = 1") {
    const SpectralSummary k33 = expansion(complete_bipartite(3, 3));
    CHECK(k33.lambda == doctest::Approx(1.0));
    CHECK(k33.lambda_n == doctest::Approx(-1.0));
    CHECK(std::abs(k33.lambda2) < 1e-12);

    // C4 has walk spectrum {1, 0, 0, -1}.
    for (auto m : {SpectralMethod::Dense, SpectralMethod::Iterative}) {
        const SpectralSummary c4 = expansion(cycle(4), with(m));
        CHECK(std::abs(c4.lambda2) < 1e-10);
        CHECK(c4.lambda_n == doctest::Approx(-1.0));
    }
}

TEST_CASE("complete graph with loops has lambda = 0") {
    const SpectralSummary s = expansion(complete(12, true));
    CHECK(s.lambda < 1e-12);
}

TEST_CASE("odd cycle matches the closed form") {
    const std::size_t n = 9;
    const SpectralSummary s = expansion(cycle(n));
    const double pi = std::acos(-1.0);
    CHECK(s.lambda2 == doctest::Approx(std::cos(2 * pi / n)).epsilon(1e-10));
    CHECK(s.lambda_n == doctest::Approx(std::cos(2 * pi * 4 / n)).epsilon(1e-10));
}

TEST_CASE("Lanczos agrees with the dense solver") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        GeneratorSpec spec;
        spec.n = 400;
        spec.p = 0.05;
        spec.seed = seed;
        const Graph g = generate(spec);
        const SpectralSummary d = expansion(g, with(SpectralMethod::Dense));
        const SpectralSummary l = expansion(g, with(SpectralMethod::Iterative));
        CHECK(l.method == SpectralMethod::Iterative);
        CHECK(l.tol <= 1e-8);
        CHECK(std::abs(d.lambda2 - l.lambda2) <= 1e-7);
        CHECK(std::abs(d.lambda_n - l.lambda_n) <= 1e-7);
    }
    GeneratorSpec reg;
    reg.family = Family::RandomRegular;
    reg.n = 300;
    reg.d = 3;
    reg.seed = 5;
    const Graph g = generate(reg);
    CHECK(std::abs(expansion(g, with(SpectralMethod::Dense)).lambda -
                   expansion(g, with(SpectralMethod::Iterative)).lambda) <= 1e-7);
}

TEST_CASE("Lanczos on a complete graph stops on an invariant subspace") {
    const SpectralSummary s = expansion(complete(500), with(SpectralMethod::Iterative));
    CHECK(s.lambda == doctest::Approx(1.0 / 499.0).epsilon(1e-9));
}

TEST_CASE("disconnected graphs are detected spectrally") {
    const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    const Graph g(6, e, Connectivity::Allow);
    CHECK_THROWS_AS(expansion(g, with(SpectralMethod::Dense)), Disconnected);
    CHECK_THROWS_AS(expansion(g, with(SpectralMethod::Iterative)), Disconnected);
}

TEST_CASE("iteration cap") {
    GeneratorSpec spec;
    spec.n = 400;
    spec.p = 0.05;
    spec.seed = 9;
    SpectralOptions o = with(SpectralMethod::Iterative);
    o.max_iter = 3;
    o.tol = 1e-12;
    try {
        expansion(generate(spec), o);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
        CHECK(e.max_iter() == 3);
    }
}

TEST_CASE("single vertex with a loop") {
    const std::vector<Edge> e{{0, 0}};
    CHECK(expansion(Graph(1, e)).lambda == 0.0);
}
