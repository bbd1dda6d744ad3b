#include "fvote/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "fvote/error.hpp"
#include "fvote/measures.hpp"

namespace fvote {

Configuration Configuration::of(const Graph& g, VertexSet a) {
    if (a.universe() != g.n()) {
        throw InvalidParam("configuration universe does not match the graph");
    }
    Configuration c;
    c.pi_a = a.empty() ? 0.0 : (a.is_full() ? 1.0 : measure(g, a));
    c.delta = 2.0 * c.pi_a - 1.0;
    c.a = std::move(a);
    return c;
}

namespace {

std::uint32_t opposing_hits(const Graph& g, Vertex v, bool in_a, std::uint32_t deg_a) {
    return in_a ? g.degree(v) - deg_a : deg_a;
}

} // namespace

Configuration step(const Configuration& cfg, const Graph& g, const BetrayalSpec& f,
                   const DrawStream& draws) {
    VertexSet next = cfg.a;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const auto v = static_cast<Vertex>(i);
        const bool in_a = cfg.a.contains(v);
        const std::uint32_t hits = opposing_hits(g, v, in_a, degree_into(g, v, cfg.a));
        if (hits == 0) continue;
        if (draws(v) < f.flip_probability(hits, g.degree(v))) {
            next.flip(v);
        }
    }
    return Configuration::of(g, std::move(next));
}

Moments exact_moments(const Configuration& cfg, const Graph& g, const BetrayalSpec& f) {
    const auto& pi = g.pi().pi;
    long double mean = cfg.pi_a;
    long double var = 0.0L;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const auto v = static_cast<Vertex>(i);
        const bool in_a = cfg.a.contains(v);
        const std::uint32_t hits = opposing_hits(g, v, in_a, degree_into(g, v, cfg.a));
        if (hits == 0) continue;
        const long double p = f.flip_probability(hits, g.degree(v));
        const long double w = pi[v];
        mean += in_a ? -w * p : w * p;
        var += w * w * p * (1.0L - p);
    }
    return {static_cast<double>(mean), static_cast<double>(var)};
}

std::string to_string(Phase p) {
    switch (p) {
    case Phase::I: return "I";
    case Phase::II: return "II";
    case Phase::III: return "III";
    case Phase::IV: return "IV";
    case Phase::V: return "V";
    case Phase::Consensus: return "consensus";
    case Phase::Other: return "other";
    }
    return "?";
}

std::string to_string(Terminal t) {
    switch (t) {
    case Terminal::Consensus0: return "consensus-0";
    case Terminal::Consensus1: return "consensus-1";
    case Terminal::Timeout: return "timeout";
    }
    return "?";
}

Phase classify_phase(double delta, const UpdatingProfile& profile, const SpectralSummary& summary,
                     double pi_norm2, std::size_t n, const PhaseConfig& config) {
    if (!(profile.eps_h > 0.0) || !(profile.eps_c > 0.0) || !(profile.kf > 0.0)) {
        throw Unclassifiable("phase bands need positive eps_h, eps_c and K(f); '" + profile.name +
                             "' has eps_h=" + std::to_string(profile.eps_h) +
                             ", eps_c=" + std::to_string(profile.eps_c));
    }
    const double abs_delta = std::abs(delta);
    if (abs_delta >= 1.0 - 1e-14) {
        return Phase::Consensus;
    }
    const double minority = 0.5 * (1.0 - abs_delta);
    const double k = profile.kf;
    const double eh = profile.eps_h;
    const double ec = profile.eps_c;
    const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
    const double lam = summary.lambda;

    if (minority <= ec / (8.0 * k)) return Phase::IV;
    if (profile.h_prime_zero_vanishes && minority <= 1.0 / (7.0 * k)) return Phase::V;
    const double c2 = config.c2.value_or(eh / k);
    if (c2 <= minority && minority <= config.c3) return Phase::III;
    const double floor2 = 2.0 * std::max(k, 8.0) / eh *
                          std::max(lam * lam, pi_norm2 * std::sqrt(logn));
    if (floor2 <= abs_delta && abs_delta <= eh / k) return Phase::II;
    if (abs_delta <= config.c1 * logn / std::sqrt(static_cast<double>(n))) return Phase::I;
    return Phase::Other;
}

std::uint64_t default_max_steps(std::size_t n) {
    const auto bits = static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))));
    return 50 * bits;
}

VotingEngine::VotingEngine(const Graph& g, const BetrayalSpec& f, VertexSet init)
    : g_(g), f_(f), a_(std::move(init)), deg_a_(g.n(), 0) {
    if (a_.universe() != g.n()) {
        throw InvalidParam("initial set universe does not match the graph");
    }
    recount();
    pi_a_ = Configuration::of(g_, a_).pi_a;
}

void VotingEngine::recount() {
    for (std::size_t v = 0; v < g_.n(); ++v) {
        deg_a_[v] = degree_into(g_, static_cast<Vertex>(v), a_);
    }
}

void VotingEngine::advance(const DrawStream& draws) {
    flips_.clear();
    const std::size_t n = g_.n();
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<Vertex>(i);
        const bool in_a = a_.contains(v);
        const std::uint32_t hits = opposing_hits(g_, v, in_a, deg_a_[v]);
        if (hits == 0) continue;
        if (draws(v) < f_.flip_probability(hits, g_.degree(v))) {
            flips_.push_back(v);
        }
    }
    for (Vertex v : flips_) {
        a_.flip(v);
        const bool joined = a_.contains(v);
        for (Vertex w : g_.neighbors(v)) {
            if (joined) {
                ++deg_a_[w];
            } else {
                --deg_a_[w];
            }
        }
    }
    ++rounds_;
    if (rounds_ % 64 == 0) {
        const std::vector<std::uint32_t> kept = deg_a_;
        recount();
        if (kept != deg_a_) {
            throw std::logic_error("incremental deg_A counts drifted from a full recount");
        }
    }
    pi_a_ = Configuration::of(g_, a_).pi_a;
}

Trajectory run(const Graph& g, const BetrayalSpec& f, const VertexSet& init,
               std::uint64_t max_steps, std::uint64_t seed, const PhaseContext* phases) {
    if (max_steps < 1) {
        throw InvalidParam("max_steps must be at least 1");
    }
    Trajectory traj;
    traj.seed = seed;
    VotingEngine engine(g, f, init);

    auto record = [&](std::uint64_t t) {
        TrajectoryStep s;
        s.t = t;
        s.pi_a = engine.pi_a();
        s.delta = 2.0 * s.pi_a - 1.0;
        const VertexSet& a = engine.set();
        if (a.empty() || a.is_full()) {
            s.phase = Phase::Consensus;
        } else if (phases != nullptr) {
            s.phase = classify_phase(s.delta, *phases);
        }
        traj.steps.push_back(s);
        return a.empty() || a.is_full();
    };

    for (std::uint64_t t = 0;; ++t) {
        if (record(t)) {
            traj.terminal = engine.set().is_full() ? Terminal::Consensus0 : Terminal::Consensus1;
            traj.t_cons = t;
            return traj;
        }
        if (t == max_steps) {
            traj.terminal = Terminal::Timeout;
            return traj;
        }
        engine.advance(DrawStream{seed, t});
    }
}

VertexSet init_by_measure(const Graph& g, double target, std::uint64_t seed) {
    if (!(target >= 0.0 && target <= 1.0)) {
        throw InvalidParam("initial measure target must lie in [0, 1]");
    }
    std::vector<Vertex> order(g.n());
    std::iota(order.begin(), order.end(), Vertex{0});
    SplitMix64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    const auto& pi = g.pi().pi;
    VertexSet a(g.n());
    long double acc = 0.0L;
    for (Vertex v : order) {
        if (acc + 0.5L * pi[v] <= target) {
            a.insert(v);
            acc += pi[v];
        }
    }
    return a;
}

VertexSet init_high_degree(const Graph& g) {
    std::vector<Vertex> order(g.n());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&g](Vertex x, Vertex y) { return g.degree(x) > g.degree(y); });
    const auto& pi = g.pi().pi;
    VertexSet a(g.n());
    long double acc = 0.0L;
    for (Vertex v : order) {
        if (acc >= 0.5L) break;
        a.insert(v);
        acc += pi[v];
    }
    return a;
}

VertexSet init_bfs_ball(const Graph& g, Vertex root) {
    if (root >= g.n()) throw InvalidParam("BFS root outside the graph");
    const auto& pi = g.pi().pi;
    VertexSet a(g.n());
    std::vector<char> seen(g.n(), 0);
    std::deque<Vertex> queue{root};
    seen[root] = 1;
    long double acc = 0.0L;
    while (!queue.empty() && acc < 0.5L) {
        const Vertex v = queue.front();
        queue.pop_front();
        a.insert(v);
        acc += pi[v];
        for (Vertex w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return a;
}

VertexSet load_vertex_set(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open vertex set '" + path + "'");
    VertexSet a(n);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        unsigned long long v = 0;
        try {
            v = std::stoull(line.substr(first));
        } catch (const std::exception&) {
            throw ParseError("bad vertex id '" + line + "' in '" + path + "'");
        }
        if (v >= n) throw ParseError("vertex id " + line + " outside the graph");
        a.insert(static_cast<Vertex>(v));
    }
    return a;
}

} // namespace fvote
