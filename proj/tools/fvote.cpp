// Command-line front end: graph generation, spectral summaries, betrayal
// function verification, single runs, inequality checks and sweeps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvote/betrayal.hpp"
#include "fvote/dynamics.hpp"
#include "fvote/error.hpp"
#include "fvote/experiments.hpp"
#include "fvote/generators.hpp"
#include "fvote/graph_io.hpp"
#include "fvote/profile.hpp"
#include "fvote/spectral.hpp"
#include "fvote/theory_checks.hpp"

using nlohmann::json;
using namespace fvote;

namespace {

json max_json(const MaxEstimate& m) {
    return {{"value", m.value}, {"argmax", m.argmax}, {"error", m.error}};
}

BetrayalSpec betrayal_from_flags(const std::string& kind, unsigned k, double rho, const std::string& inner) {
    if (kind == "best-of" || kind == "best-of-k") return BetrayalSpec::best_of(k);
    if (kind == "careful") return BetrayalSpec::careful(k);
    if (kind == "lazy") return BetrayalSpec::lazy(rho, parse_betrayal(inner));
    return parse_betrayal(kind);
}

int cmd_generate(const std::string& family, std::size_t n, double p, unsigned d, std::uint64_t seed,
                 const std::string& out) {
    GeneratorSpec spec;
    spec.family = parse_family(family);
    spec.n = n;
    spec.p = p;
    spec.d = d;
    spec.seed = seed;
    const Graph g = generate(spec);
    if (out.empty() || out == "-") {
        write_edge_list(std::cout, g);
    } else {
        save_edge_list(out, g);
    }
    return 0;
}

int cmd_spectral(const std::string& in, double tol) {
    const Graph g = load_edge_list(in);
    SpectralOptions opts;
    opts.tol = tol;
    const SpectralSummary s = expansion(g, opts);
    json j{{"n", g.n()},
           {"edges", g.edge_count()},
           {"lambda", s.lambda},
           {"lambda2", s.lambda2},
           {"lambda_n", s.lambda_n},
           {"tol", s.tol},
           {"method", to_string(s.method)},
           {"iterations", s.iterations},
           {"pi_norm2", g.pi().norm2},
           {"pi_norm3", g.pi().norm3}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_verify(const BetrayalSpec& f) {
    const QuasiMajorityReport r = quasi_majority_check(f);
    json conds = json::array();
    for (std::size_t i = 0; i < r.conditions.size(); ++i) {
        const auto& c = r.conditions[i];
        conds.push_back({{"condition", i + 1}, {"pass", c.pass}, {"witness", c.witness}, {"detail", c.detail}});
    }
    json j{{"name", r.name},
           {"f_zero", r.f_zero},
           {"range_ok", r.range_ok},
           {"surjective", r.surjective},
           {"conditions", conds},
           {"failed", r.failed()},
           {"quasi_majority", r.quasi_majority}};
    if (f.smooth()) {
        const UpdatingProfile p = derive_profile(f);
        j["profile"] = {{"eps_h", p.eps_h}, {"eps_c", p.eps_c}, {"K1_f", max_json(p.k1f)},
                        {"K2_f", max_json(p.k2f)}, {"K1_g", max_json(p.k1g)}, {"K2_H", max_json(p.k2hf)},
                        {"K", p.kf}, {"H_prime_zero_vanishes", p.h_prime_zero_vanishes}};
    } else {
        j["profile"] = nullptr;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const std::string& in, const BetrayalSpec& f, const std::string& init, std::uint64_t seed,
                 std::uint64_t max_steps, const std::string& trace) {
    const Graph g = load_edge_list(in);
    VertexSet a;
    if (init == "balanced") {
        a = init_by_measure(g, 0.5, derive_seed(seed, 1, 0));
    } else if (init.rfind("fraction:", 0) == 0) {
        const double x = std::stod(init.substr(9));
        a = init_by_measure(g, x, derive_seed(seed, 1, 0));
    } else if (init.rfind("file:", 0) == 0) {
        a = load_vertex_set(init.substr(5), g.n());
    } else {
        a = load_vertex_set(init, g.n());
    }
    if (max_steps == 0) max_steps = default_max_steps(g.n());

    std::optional<PhaseContext> ctx;
    if (f.smooth()) {
        const UpdatingProfile p = derive_profile(f);
        if (p.eps_h > 0.0 && p.eps_c > 0.0) {
            ctx = PhaseContext{p, expansion(g), g.pi().norm2, g.n(), {}};
        }
    }
    const Trajectory tr = run(g, f, a, max_steps, seed, ctx ? &*ctx : nullptr);
    if (!trace.empty()) {
        std::ofstream out(trace);
        if (!out) throw Error("cannot write '" + trace + "'");
        out << "t,pi_a,delta,phase\n";
        char buf[96];
        for (const auto& s : tr.steps) {
            std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,", static_cast<unsigned long long>(s.t), s.pi_a, s.delta);
            out << buf << to_string(s.phase) << '\n';
        }
    }
    json j{{"n", g.n()},
           {"betrayal", f.name()},
           {"seed", seed},
           {"max_steps", max_steps},
           {"terminal", to_string(tr.terminal)},
           {"t_cons", tr.t_cons ? json(*tr.t_cons) : json(nullptr)},
           {"initial_pi_a", tr.steps.front().pi_a}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_check(const std::string& suite, std::size_t instances, std::uint64_t seed, const std::string& out) {
    CorpusOptions opts;
    opts.instances = instances;
    opts.seed = seed;
    const auto results = run_corpus(parse_suite(suite), opts);
    if (out.empty() || out == "-") {
        write_csv(std::cout, results);
    } else {
        std::ofstream f(out);
        if (!f) throw Error("cannot write '" + out + "'");
        write_csv(f, results);
    }
    const std::size_t bad = count_failures(results);
    std::cerr << results.size() << " checks, " << bad << " failures\n";
    return bad == 0 ? 0 : 1;
}

int cmd_sweep(const std::string& plan_path, const std::string& out_dir) {
    const ExperimentPlan plan = load_plan(plan_path);
    const ExperimentResult r = run_plan(plan, out_dir);
    for (const auto& c : r.cells) {
        std::cerr << "cell " << c.cell.index << " n=" << c.cell.n;
        if (c.cell.k) std::cerr << " k=" << c.cell.k;
        if (c.error) {
            std::cerr << " error: " << *c.error << '\n';
            continue;
        }
        std::cerr << " lambda=" << c.spectral.lambda << " rate=" << c.consensus_rate << " median=" << c.median
                  << (c.hypothesis_ok ? "" : " [hypothesis violated]") << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional voting on expander graphs"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "sample a graph and write its edge list");
    std::string family = "gnp", out;
    std::size_t n = 0;
    double p = 0.0;
    unsigned d = 0;
    std::uint64_t seed = 1;
    gen->add_option("--family", family, "gnp | regular | complete-self-loop")->required();
    gen->add_option("--n", n, "vertex count")->required();
    gen->add_option("--p", p, "edge probability (gnp)");
    gen->add_option("--d", d, "degree (regular)");
    gen->add_option("--seed", seed);
    gen->add_option("--out", out, "edge list path, stdout if omitted");

    auto* spec = app.add_subcommand("spectral", "expansion and degree-distribution norms");
    std::string in;
    double tol = 1e-8;
    spec->add_option("--in", in, "edge list")->required()->check(CLI::ExistingFile);
    spec->add_option("--tol", tol);

    std::string kind = "best-of", inner = "best-of-2";
    unsigned k = 3;
    double rho = 1.0;
    auto add_betrayal = [&](CLI::App* sub) {
        sub->add_option("--f", kind, "pull | majority | best-of | careful | lazy | best-of-K | K-careful | lazy:RHO:F")
            ->required();
        sub->add_option("--k", k);
        sub->add_option("--rho", rho);
        sub->add_option("--inner", inner, "inner function for --f lazy");
    };

    auto* ver = app.add_subcommand("verify", "quasi-majority conditions and derived constants");
    add_betrayal(ver);

    auto* sim = app.add_subcommand("simulate", "one seeded run");
    std::string init = "balanced", trace;
    std::uint64_t max_steps = 0;
    sim->add_option("--in", in, "edge list")->required()->check(CLI::ExistingFile);
    add_betrayal(sim);
    sim->add_option("--init", init, "balanced | fraction:X | file:PATH | PATH");
    sim->add_option("--seed", seed);
    sim->add_option("--max-steps", max_steps, "0 = 50 ceil(log2 n)");
    sim->add_option("--trace", trace, "per-step CSV");

    auto* chk = app.add_subcommand("check", "inequality corpus, one CSV row per check");
    std::string suite = "all";
    std::size_t instances = 200;
    std::uint64_t check_seed = CorpusOptions{}.seed;
    chk->add_option("--suite", suite, "mixing | q_h | r_h | moments | all");
    chk->add_option("--instances", instances);
    chk->add_option("--seed", check_seed);
    chk->add_option("--out", out);

    auto* sweep = app.add_subcommand("sweep", "run an experiment plan");
    std::string plan, out_dir = ".";
    sweep->add_option("--plan", plan, "plan JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out-dir", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_generate(family, n, p, d, seed, out);
        if (*spec) return cmd_spectral(in, tol);
        if (*ver) return cmd_verify(betrayal_from_flags(kind, k, rho, inner));
        if (*sim) return cmd_simulate(in, betrayal_from_flags(kind, k, rho, inner), init, seed, max_steps, trace);
        if (*chk) return cmd_check(suite, instances, check_seed, out);
        if (*sweep) return cmd_sweep(plan, out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
