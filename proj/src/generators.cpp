#include "fvote/generators.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "fvote/error.hpp"
#include "fvote/graph_io.hpp"
#include "fvote/rng.hpp"

namespace fvote {

std::string to_string(Family f) {
    switch (f) {
    case Family::Gnp: return "gnp";
    case Family::RandomRegular: return "random-regular";
    case Family::CompleteSelfLoop: return "complete-self-loop";
    case Family::FromFile: return "from-file";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    if (name == "gnp") return Family::Gnp;
    if (name == "random-regular" || name == "regular") return Family::RandomRegular;
    if (name == "complete-self-loop") return Family::CompleteSelfLoop;
    if (name == "from-file" || name == "file") return Family::FromFile;
    throw InvalidParam("unknown graph family '" + name + "'");
}

void validate(const GeneratorSpec& spec) {
    switch (spec.family) {
    case Family::Gnp:
        if (spec.n < 2) throw InvalidParam("gnp needs n >= 2");
        if (!(spec.p > 0.0 && spec.p <= 1.0)) throw InvalidParam("gnp needs 0 < p <= 1");
        break;
    case Family::RandomRegular:
        if (spec.d < 3 || 2 * static_cast<std::size_t>(spec.d) > spec.n) {
            throw InvalidParam("random-regular needs 3 <= d <= n/2");
        }
        if ((spec.n * spec.d) % 2 != 0) throw InvalidParam("random-regular needs n*d even");
        break;
    case Family::CompleteSelfLoop:
        if (spec.n < 1) throw InvalidParam("complete-self-loop needs n >= 1");
        break;
    case Family::FromFile:
        if (spec.path.empty()) throw InvalidParam("from-file needs a path");
        break;
    }
}

namespace {

std::optional<Graph> sample_gnp(std::size_t n, double p, SplitMix64& rng) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 * 1.05) + 16);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) {
                edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
            }
        }
    }
    std::vector<std::uint32_t> deg(n, 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    if (std::find(deg.begin(), deg.end(), 0u) != deg.end()) {
        return std::nullopt;
    }
    Graph g(n, edges, Connectivity::Allow);
    if (!g.connected()) {
        return std::nullopt;
    }
    return g;
}

std::optional<Graph> sample_pairing(std::size_t n, std::uint32_t d, SplitMix64& rng) {
    std::vector<Vertex> points(n * d);
    for (std::size_t i = 0; i < points.size(); ++i) {
        points[i] = static_cast<Vertex>(i / d);
    }
    for (std::size_t i = points.size(); i > 1; --i) {
        std::swap(points[i - 1], points[rng.below(i)]);
    }
    std::vector<Edge> edges;
    edges.reserve(points.size() / 2);
    for (std::size_t i = 0; i < points.size(); i += 2) {
        Vertex u = points[i];
        Vertex v = points[i + 1];
        if (u == v) {
            return std::nullopt;
        }
        if (u > v) std::swap(u, v);
        edges.push_back({u, v});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        return std::nullopt;
    }
    Graph g(n, edges, Connectivity::Allow);
    if (!g.connected()) {
        return std::nullopt;
    }
    return g;
}

Graph complete_with_loops(std::size_t n) {
    std::vector<Edge> edges;
    edges.reserve(n * (n + 1) / 2);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u; v < n; ++v) {
            edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
        }
    }
    return Graph(n, edges);
}

} // namespace

Graph generate(const GeneratorSpec& spec) {
    validate(spec);
    if (spec.family == Family::CompleteSelfLoop) {
        return complete_with_loops(spec.n);
    }
    if (spec.family == Family::FromFile) {
        return load_edge_list(spec.path);
    }
    SplitMix64 rng(spec.seed);
    const unsigned attempts = std::max(1u, spec.retry_budget);
    for (unsigned attempt = 0; attempt < attempts; ++attempt) {
        std::optional<Graph> g = spec.family == Family::Gnp
                                     ? sample_gnp(spec.n, spec.p, rng)
                                     : sample_pairing(spec.n, spec.d, rng);
        if (g) {
            return std::move(*g);
        }
    }
    throw RetryExhausted(to_string(spec.family) + " generator exhausted " +
                         std::to_string(attempts) + " attempts (n=" + std::to_string(spec.n) +
                         ", seed=" + std::to_string(spec.seed) + ")");
}

} // namespace fvote
