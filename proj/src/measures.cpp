#include "fvote/measures.hpp"

namespace fvote {

double measure(const Graph& g, const VertexSet& s) {
    const auto& pi = g.pi().pi;
    long double acc = 0.0L;
    s.for_each([&](Vertex v) { acc += pi[v]; });
    return static_cast<double>(acc);
}

double measure_sq(const Graph& g, const VertexSet& s) {
    const auto& pi = g.pi().pi;
    long double acc = 0.0L;
    s.for_each([&](Vertex v) {
        const long double p = pi[v];
        acc += p * p;
    });
    return static_cast<double>(acc);
}

double edge_measure(const Graph& g, const VertexSet& s, const VertexSet& t) {
    // pi(v) P(v, T) = deg_T(v) / vol; summing integers first keeps this exact
    // up to the final division.
    std::uint64_t crossing = 0;
    s.for_each([&](Vertex v) { crossing += degree_into(g, v, t); });
    return static_cast<double>(static_cast<long double>(crossing) /
                               static_cast<long double>(g.volume()));
}

double weighted_deviation(const Graph& g, const VertexSet& s) {
    const auto& pi = g.pi().pi;
    const long double ps = measure(g, s);
    long double acc = 0.0L;
    for (std::size_t v = 0; v < g.n(); ++v) {
        const long double d =
            static_cast<long double>(transition_probability(g, static_cast<Vertex>(v), s)) - ps;
        acc += static_cast<long double>(pi[v]) * d * d;
    }
    return static_cast<double>(acc);
}

} // namespace fvote
