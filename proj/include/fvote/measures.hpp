#pragma once

#include <cstdint>

#include "fvote/graph.hpp"

// Exact walk-measure quantities on a graph. All sums run in ascending vertex
// order with long double accumulators, so results are bit-reproducible.

namespace fvote {

/// |N(v) ∩ S|, counting a self-loop at v once when v ∈ S.
inline std::uint32_t degree_into(const Graph& g, Vertex v, const VertexSet& s) noexcept {
    std::uint32_t c = 0;
    for (Vertex w : g.neighbors(v)) {
        c += s.contains(w) ? 1u : 0u;
    }
    return c;
}

/// P(v, S) = deg_S(v) / deg(v).
inline double transition_probability(const Graph& g, Vertex v, const VertexSet& s) noexcept {
    return static_cast<double>(degree_into(g, v, s)) / static_cast<double>(g.degree(v));
}

/// pi(S).
double measure(const Graph& g, const VertexSet& s);

/// pi_2(S) = sum_{v in S} pi(v)^2.
double measure_sq(const Graph& g, const VertexSet& s);

/// Edge measure Q(S, T) = sum_{v in S} pi(v) P(v, T).
double edge_measure(const Graph& g, const VertexSet& s, const VertexSet& t);

/// Q_h(S, T) = sum_{v in S} pi(v) h(P(v, T)).
template <class H>
double q_h(const Graph& g, const VertexSet& s, const VertexSet& t, H&& h) {
    const auto& pi = g.pi().pi;
    long double acc = 0.0L;
    s.for_each([&](Vertex v) {
        acc += static_cast<long double>(pi[v]) *
               static_cast<long double>(h(transition_probability(g, v, t)));
    });
    return static_cast<double>(acc);
}

/// R_h(S, T) = sum_{v in S} pi(v)^2 h(P(v, T)).
template <class H>
double r_h(const Graph& g, const VertexSet& s, const VertexSet& t, H&& h) {
    const auto& pi = g.pi().pi;
    long double acc = 0.0L;
    s.for_each([&](Vertex v) {
        const long double p = pi[v];
        acc += p * p * static_cast<long double>(h(transition_probability(g, v, t)));
    });
    return static_cast<double>(acc);
}

/// sum_{v in V} pi(v) (P(v, S) - pi(S))^2, the walk-weighted variance of P(., S).
double weighted_deviation(const Graph& g, const VertexSet& s);

} // namespace fvote
