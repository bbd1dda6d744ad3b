#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fvote/betrayal.hpp"
#include "fvote/graph.hpp"
#include "fvote/profile.hpp"
#include "fvote/spectral.hpp"

// Deterministic inequalities of the expander analysis, evaluated exactly on a
// concrete graph and concrete vertex sets.

namespace fvote {

struct CheckInstance {
    std::string graph;     // generator description
    std::string sets;      // sizes and measures of the sets involved
    std::string function;  // betrayal / test function name, empty if none
    std::uint64_t seed = 0;
};

struct CheckResult {
    std::string name;
    double lhs = 0.0;
    double bound = 0.0;
    double slack = 0.0;          // bound - lhs
    bool pass = false;
    bool informational = false;  // reported but not asserted
    CheckInstance instance;
};

/// Relative and absolute float slack on top of the lambda error propagation.
struct Tolerance {
    double rel = 1e-6;
    double abs = 1e-12;
};

/// pass iff lhs <= bound (1 + 10 tol_lambda)(1 + rel) + abs.
CheckResult make_result(std::string name, double lhs, double bound, const SpectralSummary& summary,
                        CheckInstance instance = {}, const Tolerance& tol = {});

/// |Q(S,T) - pi(S) pi(T)| <= lambda sqrt(pi(S) pi(T) (1 - pi(S)) (1 - pi(T))).
CheckResult check_mixing(const Graph& g, const VertexSet& s, const VertexSet& t,
                         const SpectralSummary& summary);

/// sum_v pi(v) (P(v,S) - pi(S))^2 <= lambda^2 pi(S) (1 - pi(S)).
CheckResult check_weighted_deviation(const Graph& g, const VertexSet& s,
                                     const SpectralSummary& summary);

/// Second-order expansion of Q_h(S,T) around pi(T), with remainder
/// K2(h)/2 lambda^2 pi(T)(1 - pi(T)).
CheckResult check_lemma_3_2(const Graph& g, const VertexSet& s, const VertexSet& t,
                            const BetrayalSpec& h, const UpdatingProfile& profile,
                            const SpectralSummary& summary);

/// |R_h(S,T) - pi_2(S) h(pi(T))| <= K1(h) ||pi||_3^{3/2} lambda sqrt(pi(T)(1 - pi(T))).
CheckResult check_lemma_3_3(const Graph& g, const VertexSet& s, const VertexSet& t,
                            const BetrayalSpec& h, const UpdatingProfile& profile,
                            const SpectralSummary& summary);

/// |E[pi(A')] - H_f(pi(A))| <= K2(f) lambda (|delta| + lambda) pi(A)(1 - pi(A)).
CheckResult check_lemma_3_4(const Graph& g, const VertexSet& a, const BetrayalSpec& f,
                            const UpdatingProfile& profile, const SpectralSummary& summary);

/// |Var[pi(A')] - ||pi||_2^2 g(1/2)|
///   <= K1(g) (||pi||_2^2 |delta| / 2 + 2 ||pi||_3^{3/2} lambda sqrt(pi(A)(1 - pi(A)))).
/// Marked informational when |delta| > 1/2.
CheckResult check_lemma_3_5(const Graph& g, const VertexSet& a, const BetrayalSpec& f,
                            const UpdatingProfile& profile, const SpectralSummary& summary);

/// Symmetric f only (InvalidParam otherwise). Element 0 is the mean bound
/// K2(f)/2 lambda^2 pi(A)(1 - pi(A)); element 1 is the variance bound
/// |Var - ||pi||_2^2 g(pi(A))| <= K1(g) lambda sqrt(pi(A)(1 - pi(A))) ||pi||_3^{3/2}.
std::array<CheckResult, 2> check_lemma_2_3(const Graph& g, const VertexSet& a,
                                           const BetrayalSpec& f, const UpdatingProfile& profile,
                                           const SpectralSummary& summary);

enum class CheckSuite { Mixing, QH, RH, Moments, All };
CheckSuite parse_suite(const std::string& name);
std::string to_string(CheckSuite s);

struct CorpusOptions {
    std::size_t instances = 200;  // per check
    std::uint64_t seed = 20240601;
    unsigned threads = 0;
};

/// Seeded random corpus: small G(n,p), random regular and complete-with-loops
/// graphs with random sets, plus a few structured instances (S or T = V,
/// empty sets). Dense spectral summaries throughout. Results are ordered by
/// check, then instance.
std::vector<CheckResult> run_corpus(CheckSuite suite, const CorpusOptions& opts = {});

/// Number of asserted (non-informational) results that failed.
std::size_t count_failures(const std::vector<CheckResult>& results);

/// CSV with header name,lhs,bound,slack,pass,informational,graph,sets,function,seed.
void write_csv(std::ostream& out, const std::vector<CheckResult>& results);

} // namespace fvote
