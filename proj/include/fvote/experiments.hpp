#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fvote/betrayal.hpp"
#include "fvote/dynamics.hpp"
#include "fvote/generators.hpp"
#include "fvote/profile.hpp"
#include "fvote/spectral.hpp"

namespace fvote {

/// value(n, k) = c * n^n_exp * k^k_exp.
struct PowerRule {
    double c = 0.0;
    double n_exp = 0.0;
    double k_exp = 0.0;

    double operator()(double n, double k = 1.0) const;
};

enum class InitRule { Balanced, Fraction, HighDegree, BfsBall, File };
std::string to_string(InitRule r);

struct ExperimentPlan {
    std::string id = "plan";
    Family family = Family::Gnp;
    std::vector<std::size_t> n_values;
    std::optional<PowerRule> p;   // Gnp; clamped to 1
    std::optional<PowerRule> d;   // RandomRegular; rounded, n*d made even by bumping d
    std::vector<unsigned> k_values;  // optional second grid axis
    std::optional<PowerRule> k_rule; // k = ceil(rule(n)) when k_values is empty
    std::string betrayal = "best-of-2";  // "best-of-odd" means best-of-(2k+1) with the cell's k
    InitRule init = InitRule::Balanced;
    double delta0 = 0.0;          // Fraction
    std::string init_path;        // File
    std::string graph_path;       // FromFile family
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    double max_steps_factor = 50.0;  // max_steps = ceil(factor * ceil(log2 n))
    std::optional<PowerRule> lambda_hypothesis;  // lambda <= rule(n, k)
    std::optional<double> pi2_hypothesis;        // ||pi||_2 <= c / sqrt(n)
    unsigned threads = 0;
    unsigned retry_budget = 100;
};

/// Reads the JSON schema documented in the README. Throws ParseError.
ExperimentPlan parse_plan(const std::string& json_text);
ExperimentPlan load_plan(const std::string& path);

struct Cell {
    std::size_t index = 0;
    std::size_t n = 0;
    unsigned k = 0;       // 0 when the plan has no k axis
    double param = 0.0;   // p for Gnp, d for RandomRegular
    std::uint64_t max_steps = 0;
};

/// Cells in (n, k) row-major order.
std::vector<Cell> plan_cells(const ExperimentPlan& plan);

struct TrialRecord {
    std::size_t cell = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> t_cons;
    Terminal terminal = Terminal::Timeout;
};

struct CellSummary {
    Cell cell;
    std::string betrayal;
    SpectralSummary spectral;
    double pi_norm2 = 0.0;
    double pi_norm3 = 0.0;
    std::size_t trials = 0;
    double consensus_rate = 0.0;
    double whp_threshold = 0.0;   // 1 - 5/sqrt(n)
    // Timeouts count as +infinity in the quantiles and the mean.
    double median = std::numeric_limits<double>::quiet_NaN();
    double p05 = std::numeric_limits<double>::quiet_NaN();
    double p95 = std::numeric_limits<double>::quiet_NaN();
    double mean = std::numeric_limits<double>::quiet_NaN();
    bool hypothesis_ok = true;
    std::optional<std::string> error;  // set when the cell was aborted
};

struct ExperimentResult {
    ExperimentPlan plan;
    std::vector<CellSummary> cells;
    std::vector<TrialRecord> trials;  // ordered by (cell, trial)
    std::string raw_csv_path;
};

/// Graph and betrayal function of one cell, deterministic in (plan, cell).
Graph cell_graph(const ExperimentPlan& plan, const Cell& cell);
BetrayalSpec cell_betrayal(const ExperimentPlan& plan, const Cell& cell);
std::uint64_t trial_seed(const ExperimentPlan& plan, std::size_t cell, std::size_t trial);
VertexSet trial_init(const ExperimentPlan& plan, const Graph& g, std::uint64_t seed);

/// Executes every (cell, trial). Cells whose graph cannot be generated are
/// recorded with an error and no trials. When out_dir is non-empty, raw.csv
/// and summary.json are written there.
ExperimentResult run_plan(const ExperimentPlan& plan, const std::string& out_dir = "");

/// Re-runs one (cell, trial) in isolation.
Trajectory replay(const ExperimentPlan& plan, std::size_t cell, std::size_t trial);

/// Quantile with linear interpolation between order statistics (type 7).
double quantile(std::vector<double> values, double q);

/// Statistics over t_cons with timeouts as +infinity.
void summarize(CellSummary& s, const std::vector<TrialRecord>& trials);

void write_raw_csv(const std::string& path, const ExperimentResult& r);
void write_summary_json(const std::string& path, const ExperimentResult& r);

enum class ScalingModel { LogN, LogNOverLogK, Const };
enum class Statistic { Median, P05, P95, Mean };
std::string to_string(ScalingModel m);

struct Fit {
    ScalingModel model = ScalingModel::LogN;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double rss = 0.0;
    std::size_t cells = 0;
};

/// Ordinary least squares y = intercept + slope * x. Throws InsufficientCells
/// for fewer than 3 points.
Fit ols(const std::vector<double>& x, const std::vector<double>& y);

/// Fits the chosen statistic against log2 n, log2 n / log2 k, or a constant.
/// Cells with an error, a failed hypothesis, or a non-finite statistic are
/// left out.
Fit fit_scaling(const ExperimentResult& r, ScalingModel model, Statistic stat = Statistic::Median);

/// p-value of the F test of the log n model against the constant model.
double log_vs_const_p_value(const ExperimentResult& r, Statistic stat = Statistic::Median);

/// Two-sample Kolmogorov-Smirnov statistic and its asymptotic p-value.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct DriftBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t transitions = 0;
    std::size_t bad = 0;
    double mean_bound = 0.0;
};

struct DriftReport {
    std::size_t transitions = 0;
    std::size_t bad = 0;
    double frequency = 0.0;
    double bound = 0.0;           // mean of min(1, tail bound) over the transitions
    double standard_error = 0.0;  // binomial, at the bound
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool hypothesis_met = false;  // the spectral precondition of the drift bound
    bool pass = false;
    std::vector<DriftBin> bins;
};

/// Constant-f form: a transition from delta_t with 0 < |delta_t| <= eps_h / K
/// is bad when |delta_{t+1}| <= (1 + eps_h / 8) |delta_t|; the tail bound at
/// delta_t is 2 exp(-eps_h^2 delta_t^2 / (128 ||pi||_2^2)). Passes when the
/// empirical frequency is at most the averaged bound plus three standard
/// errors. Throws NoPhaseIISteps when no transition falls in the window.
DriftReport drift_audit(const std::vector<Trajectory>& runs, const UpdatingProfile& profile,
                        const SpectralSummary& summary, double pi_norm2, std::size_t n);

/// Best-of-(2k+1) form: window 1/sqrt(nk) <= |delta_t| <= 1.25/sqrt(k), bad
/// when |delta_{t+1}| < 0.025 sqrt(k) |delta_t|, tail bound
/// 2 exp(-0.00125 k delta_t^2 / ||pi||_2^2).
DriftReport drift_audit_growing_k(const std::vector<Trajectory>& runs, unsigned k,
                                  const SpectralSummary& summary, double pi_norm2, std::size_t n);

/// `runs` independent runs on one graph; run r uses seed derive_seed(seed, r, 0)
/// and starts from init(derive_seed(seed, r, 1)).
std::vector<Trajectory> simulate_many(const Graph& g, const BetrayalSpec& f,
                                      const std::function<VertexSet(std::uint64_t)>& init,
                                      std::size_t runs, std::uint64_t seed, std::uint64_t max_steps,
                                      unsigned threads = 0);

} // namespace fvote
