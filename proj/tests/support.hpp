#pragma once

#include <vector>

#include "fvote/graph.hpp"

namespace fvote::testing {

inline Graph complete(std::size_t n, bool loops = false) {
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u) {
        if (loops) e.push_back({u, u});
        for (Vertex v = u + 1; v < n; ++v) e.push_back({u, v});
    }
    return Graph(n, e);
}

inline Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex u = 0; u + 1 < n; ++u) e.push_back({u, u + 1});
    return Graph(n, e);
}

inline Graph cycle(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u) e.push_back({u, static_cast<Vertex>((u + 1) % n)});
    return Graph(n, e);
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
    std::vector<Edge> e;
    for (Vertex u = 0; u < a; ++u) {
        for (Vertex v = 0; v < b; ++v) e.push_back({u, static_cast<Vertex>(a + v)});
    }
    return Graph(a + b, e);
}

inline VertexSet set_of(std::size_t n, std::vector<Vertex> members) {
    return VertexSet::of(n, members);
}

} // namespace fvote::testing
