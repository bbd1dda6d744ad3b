#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "../support.hpp"
#include "fvote/error.hpp"
#include "fvote/generators.hpp"
#include "fvote/graph_io.hpp"
#include "fvote/measures.hpp"
#include "fvote/rng.hpp"

using namespace fvote;
using namespace fvote::testing;

TEST_CASE("vertex set basics") {
    VertexSet s(130);
    CHECK(s.empty());
    s.insert(0);
    s.insert(64);
    s.insert(129);
    s.insert(64);
    CHECK(s.size() == 3);
    CHECK(s.contains(129));
    CHECK_FALSE(s.contains(1));
    s.flip(64);
    CHECK(s.size() == 2);
    const VertexSet c = s.complement();
    CHECK(c.size() == 128);
    CHECK_FALSE(c.contains(0));
    CHECK(c.contains(64));
    CHECK(VertexSet::full(130).is_full());
    CHECK(s.members() == std::vector<Vertex>{0, 129});
}

TEST_CASE("triangle measures") {
    const Graph g = complete(3);
    for (double p : g.pi().pi) CHECK(p == doctest::Approx(1.0 / 3.0));
    const VertexSet s = set_of(3, {0});
    const VertexSet t = set_of(3, {1});
    CHECK(edge_measure(g, s, t) == doctest::Approx(1.0 / 6.0));
    CHECK(q_h(g, s, t, [](double x) { return x; }) == doctest::Approx(1.0 / 6.0));
    CHECK(r_h(g, s, set_of(3, {1, 2}), [](double x) { return x; }) == doctest::Approx(1.0 / 9.0));
    CHECK(measure_sq(g, s) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("path transition probability") {
    const Graph g = path(3);
    CHECK(transition_probability(g, 1, set_of(3, {0})) == 0.5);
    CHECK(transition_probability(g, 0, set_of(3, {1})) == 1.0);
    CHECK(g.pi().pi[1] == doctest::Approx(0.5));
}

TEST_CASE("self-loop convention") {
    const Graph g = complete(3, true);
    CHECK(g.edge_count() == 6);
    CHECK(g.loop_count() == 3);
    CHECK(g.volume() == 9);
    for (Vertex v = 0; v < 3; ++v) CHECK(g.degree(v) == 3);
    // P(v, A) = |A| / n for every v on the complete graph with loops.
    const Graph k8 = complete(8, true);
    const VertexSet a = set_of(8, {1, 4, 6});
    for (Vertex v = 0; v < 8; ++v) CHECK(transition_probability(k8, v, a) == 3.0 / 8.0);
}

TEST_CASE("graph validation") {
    const std::vector<Edge> dup{{0, 1}, {1, 0}, {1, 2}};
    CHECK_THROWS_AS(Graph(3, dup), InvalidGraph);
    const std::vector<Edge> isolated{{0, 1}};
    CHECK_THROWS_AS(Graph(3, isolated), InvalidGraph);
    const std::vector<Edge> out_of_range{{0, 5}};
    CHECK_THROWS_AS(Graph(3, out_of_range), InvalidGraph);
    const std::vector<Edge> two_parts{{0, 1}, {2, 3}};
    CHECK_THROWS_AS(Graph(4, two_parts), InvalidGraph);
    const Graph g(4, two_parts, Connectivity::Allow);
    CHECK_FALSE(g.connected());
}

TEST_CASE("edge measure is symmetric and pi sums to one") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        GeneratorSpec spec;
        spec.n = 20 + rng.below(80);
        spec.p = 0.1 + 0.5 * rng.uniform();
        spec.seed = rng();
        const Graph g = generate(spec);
        VertexSet s(g.n()), t(g.n());
        for (Vertex v = 0; v < g.n(); ++v) {
            if (rng.uniform() < 0.4) s.insert(v);
            if (rng.uniform() < 0.6) t.insert(v);
        }
        CHECK(edge_measure(g, s, t) == edge_measure(g, t, s));
        const auto& pi = g.pi().pi;
        CHECK(std::accumulate(pi.begin(), pi.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(edge_measure(g, VertexSet::full(g.n()), s) == doctest::Approx(measure(g, s)).epsilon(1e-12));

        // sum pi (P - pi(S))^2 = sum pi P^2 - pi(S)^2 by reversibility.
        const double ps = measure(g, s);
        const double second = q_h(g, VertexSet::full(g.n()), s, [](double x) { return x * x; });
        CHECK(weighted_deviation(g, s) == doctest::Approx(second - ps * ps).epsilon(1e-9));
    }
}

TEST_CASE("edge list round trip") {
    const Graph g = complete(4, true);
    std::stringstream ss;
    write_edge_list(ss, g);
    const Graph h = read_edge_list(ss);
    CHECK(h.n() == 4);
    CHECK(h.edges() == g.edges());
    CHECK(h.volume() == g.volume());
}

TEST_CASE("edge list header and errors") {
    std::istringstream with_header("# n 3\n0 1\n1 2\n# comment\n");
    CHECK(read_edge_list(with_header).n() == 3);
    std::istringstream bad("0 1\nx y\n");
    CHECK_THROWS_AS(read_edge_list(bad), ParseError);
    std::istringstream extra("0 1 2\n");
    CHECK_THROWS_AS(read_edge_list(extra), ParseError);
}
