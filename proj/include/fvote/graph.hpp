#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fvote {

using Vertex = std::uint32_t;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    bool operator==(const Edge&) const = default;
};

/// Dense membership bit vector over {0, ..., n-1} with a cached cardinality.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t universe);

    static VertexSet full(std::size_t universe);
    static VertexSet of(std::size_t universe, std::span<const Vertex> members);

    std::size_t universe() const noexcept { return universe_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    bool is_full() const noexcept { return count_ == universe_; }

    bool contains(Vertex v) const noexcept {
        return (words_[v >> 6] >> (v & 63)) & 1ULL;
    }
    void insert(Vertex v) noexcept;
    void erase(Vertex v) noexcept;
    void flip(Vertex v) noexcept;

    VertexSet complement() const;
    std::vector<Vertex> members() const;

    template <class F>
    void for_each(F&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int b = __builtin_ctzll(bits);
                fn(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool operator==(const VertexSet& other) const noexcept {
        return universe_ == other.universe_ && words_ == other.words_;
    }

private:
    std::size_t universe_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Stationary distribution of the simple random walk, pi(v) = deg(v) / vol.
struct DegreeDistribution {
    std::vector<double> pi;
    double norm2 = 0.0;      // ||pi||_2
    double norm3 = 0.0;      // ||pi||_3
    double pi2_total = 0.0;  // sum_v pi(v)^2 = ||pi||_2^2
};

enum class Connectivity { Require, Allow };

/// Immutable undirected graph in CSR form.
///
/// A self-loop `u u` puts u in its own neighbor list once and adds 1 to
/// deg(u). The walk normalizer is the volume sum_v deg(v), which equals
/// 2|E| when every loop is counted as half an edge. Under this convention
/// P(v, A) = |A| / n holds exactly on the complete graph with loops.
class Graph {
public:
    Graph() = default;

    /// Throws InvalidGraph on out-of-range endpoints, duplicate edges,
    /// isolated vertices, or (with Connectivity::Require) disconnection.
    Graph(std::size_t n, std::span<const Edge> edges,
          Connectivity policy = Connectivity::Require);

    std::size_t n() const noexcept { return degree_.size(); }
    /// Undirected edges, each self-loop counted once.
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t loop_count() const noexcept { return loop_count_; }
    std::uint64_t volume() const noexcept { return volume_; }
    bool connected() const noexcept { return connected_; }

    std::uint32_t degree(Vertex v) const noexcept { return degree_[v]; }
    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    const DegreeDistribution& pi() const noexcept { return pi_; }

    /// Edge list with u <= v, sorted lexicographically.
    std::vector<Edge> edges() const;

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<Vertex> adjacency_;
    std::vector<std::uint32_t> degree_;
    std::size_t edge_count_ = 0;
    std::size_t loop_count_ = 0;
    std::uint64_t volume_ = 0;
    bool connected_ = false;
    DegreeDistribution pi_;
};

/// True iff every vertex is reachable from vertex 0.
bool is_connected(std::size_t n, std::span<const std::uint64_t> offsets,
                  std::span<const Vertex> adjacency);

} // namespace fvote
