#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fvote/error.hpp"
#include "fvote/experiments.hpp"

using namespace fvote;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fvote-unit-" + name);
    fs::remove_all(p);
    return p;
}

const char* kSmallPlan = R"({
  "id": "small",
  "family": "gnp",
  "n": [128, 256, 512],
  "p": {"c": 3, "n_exp": -0.5},
  "betrayal": "best-of-3",
  "init": "balanced",
  "trials": 12,
  "seed": 5,
  "threads": 2
})";

} // namespace

TEST_CASE("quantiles") {
    CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({4, 1, 3, 2}, 0.05) == doctest::Approx(1.15));
    CHECK(quantile({7}, 0.95) == 7);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(quantile({1, 2, inf}, 0.5) == 2);
    CHECK(std::isinf(quantile({1, 2, inf}, 0.95)));
}

TEST_CASE("least squares") {
    std::vector<double> x, y;
    for (double n : {1024.0, 2048.0, 4096.0, 8192.0}) {
        x.push_back(std::log2(n));
        y.push_back(2 * std::log2(n));
    }
    const Fit f = ols(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(ols({1, 2}, {1, 2}), InsufficientCells);
}

TEST_CASE("planted fits from summaries") {
    ExperimentResult r;
    for (std::size_t n : {1024u, 2048u, 4096u, 8192u}) {
        CellSummary s;
        s.cell.index = r.cells.size();
        s.cell.n = n;
        s.median = 2 * std::log2(static_cast<double>(n));
        r.cells.push_back(s);
    }
    const Fit f = fit_scaling(r, ScalingModel::LogN);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(log_vs_const_p_value(r) < 1e-6);

    r.cells[3].hypothesis_ok = false;
    CHECK(fit_scaling(r, ScalingModel::LogN).cells == 3);
    r.cells[2].error = "aborted";
    CHECK_THROWS_AS(fit_scaling(r, ScalingModel::LogN), InsufficientCells);

    ExperimentResult flat;
    const double noise[] = {0.3, -0.2, 0.1, -0.4, 0.2};
    for (int i = 0; i < 5; ++i) {
        CellSummary s;
        s.cell.n = std::size_t{1} << (10 + i);
        s.median = 6 + noise[i];
        flat.cells.push_back(s);
    }
    CHECK(log_vs_const_p_value(flat) > 0.05);
}

TEST_CASE("two-sample KS") {
    std::vector<double> a, b, c;
    SplitMix64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        a.push_back(rng.uniform());
        b.push_back(rng.uniform());
        c.push_back(rng.uniform() + 0.2);
    }
    CHECK(ks_two_sample(a, b).p_value > 1e-3);
    CHECK(ks_two_sample(a, c).p_value < 1e-6);
    CHECK(ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("plan parsing") {
    const ExperimentPlan p = parse_plan(kSmallPlan);
    CHECK(p.id == "small");
    CHECK(p.n_values.size() == 3);
    CHECK((*p.p)(256) == doctest::Approx(3.0 / 16.0));
    const auto cells = plan_cells(p);
    REQUIRE(cells.size() == 3);
    CHECK(cells[2].max_steps == 450);

    CHECK_THROWS_AS(parse_plan(R"({"n": [10], "family": "gnp"})"), ParseError);
    CHECK_THROWS_AS(parse_plan(R"({"n": [10], "p": 0.5, "colour": "red"})"), ParseError);
    CHECK_THROWS_AS(parse_plan("not json"), ParseError);
    CHECK_THROWS_AS(parse_plan(R"({"n": [10], "p": 0.5, "init": {"rule": "fraction", "delta0": 3}})"), ParseError);

    const ExperimentPlan k = parse_plan(R"({"n": [2048, 8192], "k": [4, 64], "p": {"c": 4, "n_exp": -0.5, "k_exp": 1},
                                           "betrayal": "best-of-odd"})");
    const auto kc = plan_cells(k);
    REQUIRE(kc.size() == 4);
    CHECK(kc[0].param == doctest::Approx(16.0 / std::sqrt(2048.0)));
    CHECK(kc[1].param == 1.0);  // clamped
    CHECK(cell_betrayal(k, kc[1]).name() == "best-of-129");

    const ExperimentPlan rule = parse_plan(R"({"n": [4096], "k": {"c": 1, "n_exp": 0.25}, "p": 0.5})");
    CHECK(plan_cells(rule)[0].k == 8);
}

TEST_CASE("empty plan writes valid files") {
    const fs::path dir = scratch("empty");
    ExperimentPlan p = parse_plan(R"({"id": "empty", "n": [64], "p": 0.3, "trials": 0})");
    const ExperimentResult r = run_plan(p, dir.string());
    CHECK(r.trials.empty());
    CHECK(slurp(dir / "raw.csv") == "plan_id,cell,trial,seed,n,param,lambda,pi2,pi3,t_cons,terminal\n");
    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(j["cells"].size() == 1);
    CHECK(j["cells"][0]["median"].is_null());
}

TEST_CASE("aborted cells are recorded") {
    const fs::path dir = scratch("abort");
    const ExperimentPlan p = parse_plan(R"({"id": "abort", "n": [300], "p": 0.001, "trials": 3, "retry_budget": 2})");
    const ExperimentResult r = run_plan(p, dir.string());
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].error.has_value());
    CHECK(r.trials.empty());
    CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("sweep is reproducible and summaries match the raw CSV") {
    const ExperimentPlan plan = parse_plan(kSmallPlan);
    const fs::path a = scratch("rep-a");
    const fs::path b = scratch("rep-b");
    const ExperimentResult ra = run_plan(plan, a.string());
    ExperimentPlan single = plan;
    single.threads = 1;
    run_plan(single, b.string());
    CHECK(slurp(a / "raw.csv") == slurp(b / "raw.csv"));

    for (std::size_t i : {0u, 13u, 35u}) {
        const TrialRecord& rec = ra.trials.at(i);
        const Trajectory t = replay(plan, rec.cell, rec.trial);
        CHECK(t.t_cons == rec.t_cons);
        CHECK(t.terminal == rec.terminal);
    }

    // Recompute every cell statistic from raw.csv.
    std::ifstream raw(a / "raw.csv");
    std::string line;
    std::getline(raw, line);
    std::map<std::size_t, std::vector<double>> times;
    while (std::getline(raw, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (line.back() == ',') f.push_back("");
        REQUIRE(f.size() == 11);
        times[std::stoul(f[1])].push_back(f[9].empty() ? std::numeric_limits<double>::infinity() : std::stod(f[9]));
    }
    const auto j = nlohmann::json::parse(slurp(a / "summary.json"));
    for (const auto& c : j["cells"]) {
        const auto& t = times[c["cell"].get<std::size_t>()];
        REQUIRE(t.size() == 12);
        double sum = 0;
        std::size_t ok = 0;
        for (double v : t) {
            sum += v;
            ok += std::isfinite(v) ? 1 : 0;
        }
        CHECK(c["consensus_rate"].get<double>() == doctest::Approx(static_cast<double>(ok) / t.size()).epsilon(1e-9));
        CHECK(c["median"].get<double>() == doctest::Approx(quantile(t, 0.5)).epsilon(1e-9));
        CHECK(c["p05"].get<double>() == doctest::Approx(quantile(t, 0.05)).epsilon(1e-9));
        CHECK(c["p95"].get<double>() == doctest::Approx(quantile(t, 0.95)).epsilon(1e-9));
        CHECK(c["mean"].get<double>() == doctest::Approx(sum / t.size()).epsilon(1e-9));
    }
}

TEST_CASE("hypothesis flags") {
    ExperimentPlan p = parse_plan(kSmallPlan);
    p.trials = 2;
    p.lambda_hypothesis = PowerRule{1e-3, 0.0, 0.0};
    const ExperimentResult r = run_plan(p);
    for (const auto& c : r.cells) CHECK_FALSE(c.hypothesis_ok);
    CHECK_THROWS_AS(fit_scaling(r, ScalingModel::LogN), InsufficientCells);
    p.lambda_hypothesis = PowerRule{2.0, -0.25, 0.0};
    p.pi2_hypothesis = 1.5;
    for (const auto& c : run_plan(p).cells) CHECK(c.hypothesis_ok);
}

TEST_CASE("drift audit bookkeeping") {
    const UpdatingProfile prof = derive_profile(BetrayalSpec::best_of(3));
    SpectralSummary s;
    s.lambda = 0.01;

    // Every recorded bias sits above eps_h / K = 1/12.
    Trajectory high;
    for (int t = 0; t < 5; ++t) high.steps.push_back({static_cast<std::uint64_t>(t), 0.8, 0.6, Phase::III});
    CHECK_THROWS_AS(drift_audit({high}, prof, s, 0.01, 10000), NoPhaseIISteps);

    // Two transitions from |delta| = 0.05: one grows past 1 + eps_h/8, one does not.
    Trajectory mixed;
    mixed.steps = {{0, 0.525, 0.05, Phase::I}, {1, 0.55, 0.1, Phase::I}};
    Trajectory stuck;
    stuck.steps = {{0, 0.475, -0.05, Phase::I}, {1, 0.4755, -0.049, Phase::I}};
    const DriftReport rep = drift_audit({mixed, stuck}, prof, s, 0.01, 10000);
    CHECK(rep.transitions == 2);
    CHECK(rep.bad == 1);
    CHECK(rep.frequency == 0.5);
    CHECK(rep.hypothesis_met);
    // 2 exp(-0.25 * 0.0025 / (128 * 1e-4)) > 1, so the bound saturates.
    CHECK(rep.bound == 1.0);
    CHECK(rep.pass);

    Trajectory fast;
    fast.steps = {{0, 0.55, 0.1, Phase::I}, {1, 0.502, 0.004, Phase::I}};
    const DriftReport g = drift_audit_growing_k({fast}, 16, s, 1e-3, 4096);
    CHECK(g.transitions == 1);
    CHECK(g.bad == 1);
    CHECK(g.bound == doctest::Approx(2 * std::exp(-0.00125 * 16 * 0.01 / 1e-6)));
    CHECK_FALSE(g.pass);
}
