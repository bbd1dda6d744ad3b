#include "fvote/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fvote/error.hpp"

namespace fvote {

VertexSet::VertexSet(std::size_t universe)
    : universe_(universe), count_(0), words_((universe + 63) / 64, 0ULL) {}

VertexSet VertexSet::full(std::size_t universe) {
    VertexSet s(universe);
    for (std::size_t w = 0; w < s.words_.size(); ++w) {
        s.words_[w] = ~0ULL;
    }
    if (const std::size_t tail = universe & 63; tail != 0) {
        s.words_.back() = (1ULL << tail) - 1;
    }
    s.count_ = universe;
    return s;
}

VertexSet VertexSet::of(std::size_t universe, std::span<const Vertex> members) {
    VertexSet s(universe);
    for (Vertex v : members) {
        if (v >= universe) {
            throw InvalidParam("vertex " + std::to_string(v) + " outside universe of size " +
                               std::to_string(universe));
        }
        s.insert(v);
    }
    return s;
}

void VertexSet::insert(Vertex v) noexcept {
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = 1ULL << (v & 63);
    count_ += (w & bit) == 0;
    w |= bit;
}

void VertexSet::erase(Vertex v) noexcept {
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = 1ULL << (v & 63);
    count_ -= (w & bit) != 0;
    w &= ~bit;
}

void VertexSet::flip(Vertex v) noexcept {
    if (contains(v)) {
        erase(v);
    } else {
        insert(v);
    }
}

VertexSet VertexSet::complement() const {
    VertexSet c = full(universe_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        c.words_[w] &= ~words_[w];
    }
    c.count_ = universe_ - count_;
    return c;
}

std::vector<Vertex> VertexSet::members() const {
    std::vector<Vertex> out;
    out.reserve(count_);
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
}

bool is_connected(std::size_t n, std::span<const std::uint64_t> offsets,
                  std::span<const Vertex> adjacency) {
    if (n == 0) {
        return false;
    }
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (std::uint64_t i = offsets[u]; i < offsets[u + 1]; ++i) {
            const Vertex w = adjacency[i];
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

Graph::Graph(std::size_t n, std::span<const Edge> edges, Connectivity policy) {
    if (n == 0) {
        throw InvalidGraph("graph must have at least one vertex");
    }
    if (n > std::size_t{0xFFFFFFFFu}) {
        throw InvalidGraph("vertex count exceeds 32-bit index range");
    }
    degree_.assign(n, 0);
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw InvalidGraph("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                               ") references a vertex outside [0, " + std::to_string(n) + ")");
        }
        ++degree_[e.u];
        if (e.u != e.v) {
            ++degree_[e.v];
        } else {
            ++loop_count_;
        }
    }
    edge_count_ = edges.size();

    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        offsets_[v + 1] = offsets_[v] + degree_[v];
    }
    volume_ = offsets_[n];
    adjacency_.resize(volume_);
    std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges) {
        adjacency_[cursor[e.u]++] = e.v;
        if (e.u != e.v) {
            adjacency_[cursor[e.v]++] = e.u;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
        auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
        std::sort(first, last);
        if (std::adjacent_find(first, last) != last) {
            throw InvalidGraph("duplicate edge at vertex " + std::to_string(v));
        }
        if (degree_[v] == 0) {
            throw InvalidGraph("vertex " + std::to_string(v) + " is isolated");
        }
    }

    connected_ = is_connected(n, offsets_, adjacency_);
    if (!connected_ && policy == Connectivity::Require) {
        throw InvalidGraph("graph is disconnected");
    }

    pi_.pi.resize(n);
    long double sq = 0.0L;
    long double cube = 0.0L;
    const auto vol = static_cast<long double>(volume_);
    for (std::size_t v = 0; v < n; ++v) {
        const long double p = static_cast<long double>(degree_[v]) / vol;
        pi_.pi[v] = static_cast<double>(p);
        sq += p * p;
        cube += p * p * p;
    }
    pi_.pi2_total = static_cast<double>(sq);
    pi_.norm2 = static_cast<double>(std::sqrt(sq));
    pi_.norm3 = static_cast<double>(std::cbrt(cube));
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < n(); ++u) {
        for (Vertex w : neighbors(static_cast<Vertex>(u))) {
            if (w >= u) {
                out.push_back({static_cast<Vertex>(u), w});
            }
        }
    }
    return out;
}

} // namespace fvote
