#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fvote/betrayal.hpp"
#include "fvote/graph.hpp"
#include "fvote/profile.hpp"
#include "fvote/rng.hpp"
#include "fvote/spectral.hpp"

namespace fvote {

/// Opinion-0 holders A with pi(A) and the bias delta(A) = 2 pi(A) - 1.
struct Configuration {
    VertexSet a;
    double pi_a = 0.0;
    double delta = -1.0;

    static Configuration of(const Graph& g, VertexSet a);
    bool consensus() const noexcept { return a.empty() || a.is_full(); }
};

/// One synchronous round. Each v in B = V \ A joins A with probability
/// f(P(v, A)); each v in A leaves with probability f(P(v, B)). Vertex v
/// consumes the single draw `draws(v)` and flips iff it is below that
/// probability.
Configuration step(const Configuration& cfg, const Graph& g, const BetrayalSpec& f,
                   const DrawStream& draws);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Closed-form E[pi(A')] and Var[pi(A')] after one round from cfg.
Moments exact_moments(const Configuration& cfg, const Graph& g, const BetrayalSpec& f);

enum class Phase { I, II, III, IV, V, Consensus, Other };
std::string to_string(Phase p);

struct PhaseConfig {
    double c1 = 1.0;
    std::optional<double> c2;  // defaults to eps_h / K(f)
    double c3 = 0.45;
};

/// Everything phase labelling needs besides delta itself.
struct PhaseContext {
    UpdatingProfile profile;
    SpectralSummary summary;
    double pi_norm2 = 0.0;
    std::size_t n = 0;
    PhaseConfig config;
};

/// Labels a bias with the consensus-time phase it falls in. Bands, with
/// m = (1 - |delta|) / 2 the minority mass and K = K(f):
///   IV  m <= eps_c / (8K)
///   V   H'(0) = 0 and m <= 1 / (7K)
///   III c2 <= m <= c3
///   II  (2 max(K, 8) / eps_h) max(lambda^2, ||pi||_2 sqrt(log n)) <= |delta| <= eps_h / K
///   I   |delta| <= c1 log n / sqrt(n)
/// Overlaps resolve as IV > V > III > II > I. Throws Unclassifiable when
/// eps_h or eps_c is not positive.
Phase classify_phase(double delta, const UpdatingProfile& profile, const SpectralSummary& summary,
                     double pi_norm2, std::size_t n, const PhaseConfig& config = {});

inline Phase classify_phase(double delta, const PhaseContext& ctx) {
    return classify_phase(delta, ctx.profile, ctx.summary, ctx.pi_norm2, ctx.n, ctx.config);
}

enum class Terminal { Consensus0, Consensus1, Timeout };
std::string to_string(Terminal t);

struct TrajectoryStep {
    std::uint64_t t = 0;
    double pi_a = 0.0;
    double delta = 0.0;
    Phase phase = Phase::Other;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    Terminal terminal = Terminal::Timeout;
    std::optional<std::uint64_t> t_cons;
    std::uint64_t seed = 0;
};

/// 50 * ceil(log2 n).
std::uint64_t default_max_steps(std::size_t n);

/// Synchronous voting engine that keeps deg_A(v) for every vertex up to date
/// as vertices flip, recounting from scratch every 64 rounds as an audit.
class VotingEngine {
public:
    VotingEngine(const Graph& g, const BetrayalSpec& f, VertexSet init);

    void advance(const DrawStream& draws);

    const VertexSet& set() const noexcept { return a_; }
    double pi_a() const noexcept { return pi_a_; }
    std::uint64_t rounds() const noexcept { return rounds_; }

private:
    void recount();

    const Graph& g_;
    const BetrayalSpec& f_;
    VertexSet a_;
    std::vector<std::uint32_t> deg_a_;
    std::vector<Vertex> flips_;
    double pi_a_ = 0.0;
    std::uint64_t rounds_ = 0;
};

/// Iterates rounds from init until A is empty or V, or max_steps rounds have
/// run. Round t uses DrawStream{seed, t}. With a phase context every recorded
/// step carries its phase label; without one, non-consensus steps are Other.
Trajectory run(const Graph& g, const BetrayalSpec& f, const VertexSet& init,
               std::uint64_t max_steps, std::uint64_t seed, const PhaseContext* phases = nullptr);

// Initial configurations.

/// Random set whose measure is as close to `target` as a greedy pass over a
/// seeded random vertex order gets (within max_v pi(v) / 2).
VertexSet init_by_measure(const Graph& g, double target, std::uint64_t seed);
/// Highest-degree vertices (ties by index) until pi(A) >= 1/2.
VertexSet init_high_degree(const Graph& g);
/// Breadth-first ball around `root` until pi(A) >= 1/2.
VertexSet init_bfs_ball(const Graph& g, Vertex root);
/// Vertex ids, one per line; '#' comments allowed.
VertexSet load_vertex_set(const std::string& path, std::size_t n);

} // namespace fvote
