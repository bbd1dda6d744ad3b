#include "fvote/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/fisher_f.hpp>
#include <json.hpp>

#include "fvote/error.hpp"
#include "fvote/parallel.hpp"
#include "fvote/rng.hpp"

namespace fvote {

using nlohmann::json;

double PowerRule::operator()(double n, double k) const {
    return c * std::pow(n, n_exp) * std::pow(k, k_exp);
}

std::string to_string(InitRule r) {
    switch (r) {
    case InitRule::Balanced: return "balanced";
    case InitRule::Fraction: return "fraction";
    case InitRule::HighDegree: return "high-degree";
    case InitRule::BfsBall: return "bfs";
    case InitRule::File: return "file";
    }
    return "?";
}

std::string to_string(ScalingModel m) {
    switch (m) {
    case ScalingModel::LogN: return "log_n";
    case ScalingModel::LogNOverLogK: return "log_n_over_log_k";
    case ScalingModel::Const: return "const";
    }
    return "?";
}

// ---------------------------------------------------------------- plan JSON

namespace {

PowerRule parse_rule(const json& j, const char* what) {
    if (j.is_number()) return PowerRule{j.get<double>(), 0.0, 0.0};
    if (!j.is_object()) throw ParseError(std::string(what) + " must be a number or {c, n_exp, k_exp}");
    PowerRule r;
    for (const auto& [key, v] : j.items()) {
        if (key == "c") r.c = v.get<double>();
        else if (key == "n_exp") r.n_exp = v.get<double>();
        else if (key == "k_exp") r.k_exp = v.get<double>();
        else throw ParseError(std::string("unknown field '") + key + "' in " + what);
    }
    return r;
}

InitRule parse_init_rule(const std::string& s) {
    if (s == "balanced") return InitRule::Balanced;
    if (s == "fraction") return InitRule::Fraction;
    if (s == "high-degree") return InitRule::HighDegree;
    if (s == "bfs") return InitRule::BfsBall;
    if (s == "file") return InitRule::File;
    throw ParseError("unknown init rule '" + s + "'");
}

} // namespace

ExperimentPlan parse_plan(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("plan is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("plan must be a JSON object");
    ExperimentPlan p;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "id") p.id = v.get<std::string>();
            else if (key == "family") p.family = parse_family(v.get<std::string>());
            else if (key == "n") {
                p.n_values = v.is_array() ? v.get<std::vector<std::size_t>>()
                                          : std::vector<std::size_t>{v.get<std::size_t>()};
            } else if (key == "p") p.p = parse_rule(v, "p");
            else if (key == "d") p.d = parse_rule(v, "d");
            else if (key == "k") {
                if (v.is_array()) p.k_values = v.get<std::vector<unsigned>>();
                else if (v.is_number_unsigned()) p.k_values = {v.get<unsigned>()};
                else p.k_rule = parse_rule(v, "k");
            } else if (key == "betrayal") p.betrayal = v.get<std::string>();
            else if (key == "init") {
                if (v.is_string()) {
                    p.init = parse_init_rule(v.get<std::string>());
                } else {
                    for (const auto& [ik, iv] : v.items()) {
                        if (ik == "rule") p.init = parse_init_rule(iv.get<std::string>());
                        else if (ik == "delta0") p.delta0 = iv.get<double>();
                        else if (ik == "path") p.init_path = iv.get<std::string>();
                        else throw ParseError("unknown field '" + ik + "' in init");
                    }
                }
            } else if (key == "graph_path") p.graph_path = v.get<std::string>();
            else if (key == "trials") p.trials = v.get<std::size_t>();
            else if (key == "seed") p.seed = v.get<std::uint64_t>();
            else if (key == "max_steps_factor") p.max_steps_factor = v.get<double>();
            else if (key == "hypothesis") {
                for (const auto& [hk, hv] : v.items()) {
                    if (hk == "lambda") p.lambda_hypothesis = parse_rule(hv, "hypothesis.lambda");
                    else if (hk == "pi2") p.pi2_hypothesis = hv.get<double>();
                    else throw ParseError("unknown field '" + hk + "' in hypothesis");
                }
            } else if (key == "threads") p.threads = v.get<unsigned>();
            else if (key == "retry_budget") p.retry_budget = v.get<unsigned>();
            else throw ParseError("unknown plan field '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad plan field type: ") + e.what());
    } catch (const InvalidParam& e) {
        throw ParseError(e.what());
    }
    if (p.n_values.empty()) throw ParseError("plan needs at least one n");
    if (p.family == Family::Gnp && !p.p) throw ParseError("gnp plan needs a p rule");
    if (p.family == Family::RandomRegular && !p.d) throw ParseError("regular plan needs a d rule");
    if (p.family == Family::FromFile && p.graph_path.empty()) throw ParseError("file plan needs graph_path");
    if (p.init == InitRule::Fraction && !(std::abs(p.delta0) <= 1.0)) {
        throw ParseError("delta0 must lie in [-1, 1]");
    }
    if (p.init == InitRule::File && p.init_path.empty()) throw ParseError("file init needs a path");
    if (!(p.max_steps_factor > 0.0)) throw ParseError("max_steps_factor must be positive");
    return p;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open plan '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_plan(os.str());
}

// ---------------------------------------------------------------- cells

std::vector<Cell> plan_cells(const ExperimentPlan& plan) {
    std::vector<Cell> cells;
    for (std::size_t n : plan.n_values) {
        std::vector<unsigned> ks = plan.k_values;
        if (ks.empty() && plan.k_rule) {
            ks.push_back(static_cast<unsigned>(std::ceil((*plan.k_rule)(static_cast<double>(n)) - 1e-9)));
        }
        if (ks.empty()) ks.push_back(0);
        for (unsigned k : ks) {
            Cell c;
            c.index = cells.size();
            c.n = n;
            c.k = k;
            const double kk = k == 0 ? 1.0 : static_cast<double>(k);
            if (plan.family == Family::Gnp) {
                c.param = std::min(1.0, (*plan.p)(static_cast<double>(n), kk));
            } else if (plan.family == Family::RandomRegular) {
                auto d = static_cast<std::uint64_t>(std::llround((*plan.d)(static_cast<double>(n), kk)));
                if ((d * n) % 2 != 0) ++d;
                c.param = static_cast<double>(d);
            }
            const double bits = std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(n, 2))));
            c.max_steps = static_cast<std::uint64_t>(std::ceil(plan.max_steps_factor * bits));
            cells.push_back(c);
        }
    }
    return cells;
}

Graph cell_graph(const ExperimentPlan& plan, const Cell& cell) {
    GeneratorSpec spec;
    spec.family = plan.family;
    spec.n = cell.n;
    spec.seed = derive_seed(plan.seed ^ 0x67726170685F7365ULL, cell.index, 0);
    spec.retry_budget = plan.retry_budget;
    spec.path = plan.graph_path;
    if (plan.family == Family::Gnp) spec.p = cell.param;
    if (plan.family == Family::RandomRegular) spec.d = static_cast<std::uint32_t>(cell.param);
    return generate(spec);
}

BetrayalSpec cell_betrayal(const ExperimentPlan& plan, const Cell& cell) {
    if (plan.betrayal == "best-of-odd") {
        if (cell.k == 0) throw InvalidParam("best-of-odd needs a k axis in the plan");
        return BetrayalSpec::best_of(2 * cell.k + 1);
    }
    return parse_betrayal(plan.betrayal);
}

std::uint64_t trial_seed(const ExperimentPlan& plan, std::size_t cell, std::size_t trial) {
    return derive_seed(plan.seed, cell, trial);
}

VertexSet trial_init(const ExperimentPlan& plan, const Graph& g, std::uint64_t seed) {
    const std::uint64_t s = derive_seed(seed, 1, 0);
    switch (plan.init) {
    case InitRule::Balanced: return init_by_measure(g, 0.5, s);
    case InitRule::Fraction: return init_by_measure(g, 0.5 * (1.0 + plan.delta0), s);
    case InitRule::HighDegree: return init_high_degree(g);
    case InitRule::BfsBall: return init_bfs_ball(g, static_cast<Vertex>(SplitMix64(s).below(g.n())));
    case InitRule::File: return load_vertex_set(plan.init_path, g.n());
    }
    throw InvalidParam("unknown init rule");
}

// ---------------------------------------------------------------- statistics

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || lo + 1 >= values.size()) return values[lo];
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

void summarize(CellSummary& s, const std::vector<TrialRecord>& trials) {
    std::vector<double> times;
    std::size_t ok = 0;
    for (const auto& t : trials) {
        if (t.cell != s.cell.index) continue;
        if (t.t_cons) {
            ++ok;
            times.push_back(static_cast<double>(*t.t_cons));
        } else {
            times.push_back(std::numeric_limits<double>::infinity());
        }
    }
    s.trials = times.size();
    s.whp_threshold = 1.0 - 5.0 / std::sqrt(static_cast<double>(s.cell.n));
    if (times.empty()) {
        s.consensus_rate = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    s.consensus_rate = static_cast<double>(ok) / static_cast<double>(times.size());
    s.median = quantile(times, 0.5);
    s.p05 = quantile(times, 0.05);
    s.p95 = quantile(times, 0.95);
    long double sum = 0.0L;
    for (double t : times) sum += t;
    s.mean = static_cast<double>(sum / static_cast<long double>(times.size()));
}

// ---------------------------------------------------------------- running

namespace {

void check_hypothesis(const ExperimentPlan& plan, CellSummary& s) {
    const double n = static_cast<double>(s.cell.n);
    const double k = s.cell.k == 0 ? 1.0 : static_cast<double>(s.cell.k);
    bool ok = true;
    if (plan.lambda_hypothesis) {
        ok = ok && s.spectral.lambda - s.spectral.tol <= (*plan.lambda_hypothesis)(n, k);
    }
    if (plan.pi2_hypothesis) ok = ok && s.pi_norm2 <= *plan.pi2_hypothesis / std::sqrt(n);
    s.hypothesis_ok = ok;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ExperimentResult run_plan(const ExperimentPlan& plan, const std::string& out_dir) {
    ExperimentResult result;
    result.plan = plan;
    for (const Cell& cell : plan_cells(plan)) {
        CellSummary s;
        s.cell = cell;
        try {
            const Graph g = cell_graph(plan, cell);
            const BetrayalSpec f = cell_betrayal(plan, cell);
            s.betrayal = f.name();
            s.spectral = expansion(g);
            s.pi_norm2 = g.pi().norm2;
            s.pi_norm3 = g.pi().norm3;
            check_hypothesis(plan, s);

            std::vector<TrialRecord> records(plan.trials);
            parallel_for(plan.trials, [&](std::size_t t) {
                TrialRecord& rec = records[t];
                rec.cell = cell.index;
                rec.trial = t;
                rec.seed = trial_seed(plan, cell.index, t);
                const Trajectory traj =
                    run(g, f, trial_init(plan, g, rec.seed), cell.max_steps, rec.seed);
                rec.t_cons = traj.t_cons;
                rec.terminal = traj.terminal;
            }, plan.threads);
            result.trials.insert(result.trials.end(), records.begin(), records.end());
        } catch (const RetryExhausted& e) {
            s.error = e.what();
        } catch (const NoConvergence& e) {
            s.error = e.what();
        } catch (const Disconnected& e) {
            s.error = e.what();
        }
        summarize(s, result.trials);
        result.cells.push_back(std::move(s));
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        result.raw_csv_path = (std::filesystem::path(out_dir) / "raw.csv").string();
        write_raw_csv(result.raw_csv_path, result);
        write_summary_json((std::filesystem::path(out_dir) / "summary.json").string(), result);
    }
    return result;
}

Trajectory replay(const ExperimentPlan& plan, std::size_t cell, std::size_t trial) {
    const auto cells = plan_cells(plan);
    if (cell >= cells.size()) throw InvalidParam("cell index outside the plan");
    const Cell& c = cells[cell];
    const Graph g = cell_graph(plan, c);
    const BetrayalSpec f = cell_betrayal(plan, c);
    const std::uint64_t seed = trial_seed(plan, cell, trial);
    return run(g, f, trial_init(plan, g, seed), c.max_steps, seed);
}

void write_raw_csv(const std::string& path, const ExperimentResult& r) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "plan_id,cell,trial,seed,n,param,lambda,pi2,pi3,t_cons,terminal\n";
    for (const auto& t : r.trials) {
        const CellSummary& s = r.cells.at(t.cell);
        out << r.plan.id << ',' << t.cell << ',' << t.trial << ',' << t.seed << ',' << s.cell.n << ','
            << fmt(s.cell.param) << ',' << fmt(s.spectral.lambda) << ',' << fmt(s.pi_norm2) << ','
            << fmt(s.pi_norm3) << ',';
        if (t.t_cons) out << *t.t_cons;
        out << ',' << to_string(t.terminal) << '\n';
    }
}

void write_summary_json(const std::string& path, const ExperimentResult& r) {
    json j;
    j["plan_id"] = r.plan.id;
    j["seed"] = r.plan.seed;
    j["trials"] = r.plan.trials;
    j["raw_csv"] = r.raw_csv_path;
    json cells = json::array();
    for (const auto& s : r.cells) {
        json c;
        c["cell"] = s.cell.index;
        c["n"] = s.cell.n;
        c["k"] = s.cell.k;
        c["param"] = s.cell.param;
        c["max_steps"] = s.cell.max_steps;
        c["betrayal"] = s.betrayal;
        c["lambda"] = s.spectral.lambda;
        c["lambda2"] = s.spectral.lambda2;
        c["lambda_n"] = s.spectral.lambda_n;
        c["lambda_tol"] = s.spectral.tol;
        c["spectral_method"] = to_string(s.spectral.method);
        c["pi2"] = s.pi_norm2;
        c["pi3"] = s.pi_norm3;
        c["trials"] = s.trials;
        c["consensus_rate"] = number_or_null(s.consensus_rate);
        c["whp_threshold"] = s.whp_threshold;
        c["whp"] = std::isfinite(s.consensus_rate) && s.consensus_rate >= s.whp_threshold;
        c["median"] = number_or_null(s.median);
        c["p05"] = number_or_null(s.p05);
        c["p95"] = number_or_null(s.p95);
        c["mean"] = number_or_null(s.mean);
        c["hypothesis_ok"] = s.hypothesis_ok;
        c["error"] = s.error ? json(*s.error) : json(nullptr);
        cells.push_back(c);
    }
    j["cells"] = cells;
    json fits = json::object();
    for (ScalingModel m : {ScalingModel::LogN, ScalingModel::LogNOverLogK, ScalingModel::Const}) {
        try {
            const Fit f = fit_scaling(r, m);
            fits[to_string(m)] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2},
                                  {"cells", f.cells}};
        } catch (const Error&) {
            fits[to_string(m)] = nullptr;
        }
    }
    j["fits"] = fits;
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- fits

Fit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidParam("ols needs equally many x and y values");
    if (x.size() < 3) throw InsufficientCells("scaling fit needs at least 3 cells, got " + std::to_string(x.size()));
    const double m = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Fit f;
    f.cells = x.size();
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - f.intercept - f.slope * x[i];
        rss += e * e;
    }
    f.rss = rss;
    f.r2 = syy > 0.0 ? 1.0 - rss / syy : (rss == 0.0 ? 1.0 : 0.0);
    return f;
}

namespace {

double statistic_of(const CellSummary& s, Statistic stat) {
    switch (stat) {
    case Statistic::Median: return s.median;
    case Statistic::P05: return s.p05;
    case Statistic::P95: return s.p95;
    case Statistic::Mean: return s.mean;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

Fit fit_scaling(const ExperimentResult& r, ScalingModel model, Statistic stat) {
    std::vector<double> x, y;
    for (const auto& s : r.cells) {
        if (s.error || !s.hypothesis_ok) continue;
        const double v = statistic_of(s, stat);
        if (!std::isfinite(v)) continue;
        const double logn = std::log2(static_cast<double>(s.cell.n));
        double reg = 0.0;
        if (model == ScalingModel::LogN) {
            reg = logn;
        } else if (model == ScalingModel::LogNOverLogK) {
            if (s.cell.k < 2) continue;
            reg = logn / std::log2(static_cast<double>(s.cell.k));
        }
        x.push_back(reg);
        y.push_back(v);
    }
    Fit f = ols(x, y);
    f.model = model;
    if (model == ScalingModel::Const) {
        f.slope = 0.0;
        f.r2 = 0.0;
    }
    return f;
}

double log_vs_const_p_value(const ExperimentResult& r, Statistic stat) {
    const Fit lin = fit_scaling(r, ScalingModel::LogN, stat);
    const Fit cst = fit_scaling(r, ScalingModel::Const, stat);
    const double dof = static_cast<double>(lin.cells) - 2.0;
    if (dof < 1.0) throw InsufficientCells("model comparison needs at least 3 cells");
    if (lin.rss <= 0.0) return cst.rss > 0.0 ? 0.0 : 1.0;
    const double fstat = (cst.rss - lin.rss) / (lin.rss / dof);
    if (!(fstat > 0.0)) return 1.0;
    const boost::math::fisher_f_distribution<double> dist(1.0, dof);
    return boost::math::cdf(boost::math::complement(dist, fstat));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InvalidParam("KS test needs two non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult r;
    r.statistic = d;
    const double en = std::sqrt(na * nb / (na + nb));
    const double lam = (en + 0.12 + 0.11 / en) * d;
    // Kolmogorov tail series.
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = sign * 2.0 * std::exp(-2.0 * k * k * lam * lam);
        sum += term;
        if (std::abs(term) < 1e-16) break;
        sign = -sign;
    }
    r.p_value = lam < 0.2 ? 1.0 : std::clamp(sum, 0.0, 1.0);
    return r;
}

// ---------------------------------------------------------------- drift

namespace {

template <class InWindow, class IsBad, class Bound>
DriftReport audit(const std::vector<Trajectory>& runs, double lo, double hi, InWindow in_window,
                  IsBad is_bad, Bound bound) {
    DriftReport rep;
    rep.window_lo = lo;
    rep.window_hi = hi;
    constexpr std::size_t kBins = 8;
    rep.bins.resize(kBins);
    for (std::size_t b = 0; b < kBins; ++b) {
        rep.bins[b].lo = lo + (hi - lo) * static_cast<double>(b) / kBins;
        rep.bins[b].hi = lo + (hi - lo) * static_cast<double>(b + 1) / kBins;
    }
    long double bound_sum = 0.0L;
    for (const auto& tr : runs) {
        for (std::size_t i = 0; i + 1 < tr.steps.size(); ++i) {
            const double d0 = std::abs(tr.steps[i].delta);
            if (tr.steps[i].phase == Phase::Consensus || !in_window(d0)) continue;
            const double d1 = std::abs(tr.steps[i + 1].delta);
            const bool bad = is_bad(d0, d1);
            const double b = std::min(1.0, bound(d0));
            ++rep.transitions;
            rep.bad += bad ? 1 : 0;
            bound_sum += b;
            auto bin = static_cast<std::size_t>((d0 - lo) / (hi - lo) * kBins);
            bin = std::min(bin, kBins - 1);
            rep.bins[bin].transitions++;
            rep.bins[bin].bad += bad ? 1 : 0;
            rep.bins[bin].mean_bound += b;
        }
    }
    for (auto& bin : rep.bins) {
        if (bin.transitions > 0) bin.mean_bound /= static_cast<double>(bin.transitions);
    }
    if (rep.transitions == 0) {
        throw NoPhaseIISteps("no transitions with |delta| in [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    }
    const double m = static_cast<double>(rep.transitions);
    rep.frequency = static_cast<double>(rep.bad) / m;
    rep.bound = static_cast<double>(bound_sum / m);
    rep.standard_error = std::sqrt(rep.bound * (1.0 - rep.bound) / m);
    rep.pass = rep.frequency <= rep.bound + 3.0 * rep.standard_error + 1e-12;
    return rep;
}

} // namespace

DriftReport drift_audit(const std::vector<Trajectory>& runs, const UpdatingProfile& profile,
                        const SpectralSummary& summary, double pi_norm2, std::size_t n) {
    (void)n;
    if (!(profile.eps_h > 0.0) || !(profile.kf > 0.0)) {
        throw Unclassifiable("drift audit needs positive eps_h and K(f)");
    }
    const double eh = profile.eps_h;
    const double hi = eh / profile.kf;
    const double scale = eh * eh / (128.0 * pi_norm2 * pi_norm2);
    DriftReport rep = audit(
        runs, 0.0, hi, [hi](double d) { return d > 0.0 && d <= hi; },
        [eh](double d0, double d1) { return d1 <= (1.0 + eh / 8.0) * d0; },
        [scale](double d) { return 2.0 * std::exp(-scale * d * d); });
    rep.hypothesis_met = summary.lambda <= eh / (2.0 * profile.kf);
    return rep;
}

DriftReport drift_audit_growing_k(const std::vector<Trajectory>& runs, unsigned k,
                                  const SpectralSummary& summary, double pi_norm2, std::size_t n) {
    if (k < 1) throw InvalidParam("growing-k drift audit needs k >= 1");
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    const double lo = 1.0 / std::sqrt(nn * kk);
    const double hi = 1.25 / std::sqrt(kk);
    const double factor = 0.025 * std::sqrt(kk);
    const double scale = 0.00125 * kk / (pi_norm2 * pi_norm2);
    DriftReport rep = audit(
        runs, lo, hi, [lo, hi](double d) { return d >= lo && d <= hi; },
        [factor](double d0, double d1) { return d1 < factor * d0; },
        [scale](double d) { return 2.0 * std::exp(-scale * d * d); });
    rep.hypothesis_met = summary.lambda <= 1.0 / (std::sqrt(kk) * std::pow(nn, 0.25));
    return rep;
}

std::vector<Trajectory> simulate_many(const Graph& g, const BetrayalSpec& f,
                                      const std::function<VertexSet(std::uint64_t)>& init,
                                      std::size_t runs, std::uint64_t seed, std::uint64_t max_steps,
                                      unsigned threads) {
    std::vector<Trajectory> out(runs);
    parallel_for(runs, [&](std::size_t r) {
        out[r] = run(g, f, init(derive_seed(seed, r, 1)), max_steps, derive_seed(seed, r, 0));
    }, threads);
    return out;
}

} // namespace fvote
