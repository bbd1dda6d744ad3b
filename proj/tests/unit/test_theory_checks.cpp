#include <doctest.h>

#include <map>
#include <sstream>

#include "../support.hpp"
#include "fvote/error.hpp"
#include "fvote/theory_checks.hpp"

using namespace fvote;
using namespace fvote::testing;

TEST_CASE("mixing on K5") {
    const Graph g = complete(5);
    const SpectralSummary s = expansion(g);
    const CheckResult r = check_mixing(g, set_of(5, {0, 1}), set_of(5, {2, 3}), s);
    CHECK(r.lhs == doctest::Approx(0.04));
    CHECK(r.bound == doctest::Approx(0.06));
    CHECK(r.pass);
    CHECK(r.slack == doctest::Approx(0.02));

    const CheckResult full = check_mixing(g, VertexSet::full(5), set_of(5, {2}), s);
    CHECK(full.lhs == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(full.bound == 0.0);
    CHECK(full.pass);
}

TEST_CASE("second-order expansion") {
    const Graph g = complete(5);
    const SpectralSummary s = expansion(g);
    const VertexSet t = set_of(5, {2, 3});

    // Linear h: no remainder at all.
    const BetrayalSpec pull = BetrayalSpec::pull();
    const CheckResult lin = check_lemma_3_2(g, set_of(5, {0, 4}), t, pull, derive_profile(pull), s);
    CHECK(lin.bound == 0.0);
    CHECK(lin.lhs <= 1e-15);
    CHECK(lin.pass);

    // h = x^2 with S = V: |sum pi P^2 - pi(T)^2| <= lambda^2 pi(T)(1 - pi(T)), tight on K5:
    // (2/5)(1/16) + (3/5)(1/4) - 0.16 = 0.015 and 0.0625 * 0.24 = 0.015.
    const BetrayalSpec sq = BetrayalSpec::careful(2);
    const CheckResult r = check_lemma_3_2(g, VertexSet::full(5), t, sq, derive_profile(sq), s);
    CHECK(r.lhs == doctest::Approx(0.015));
    CHECK(r.bound == doctest::Approx(0.015));
    CHECK(r.pass);
    CHECK_THROWS_AS(check_lemma_3_2(g, t, t, BetrayalSpec::majority(), derive_profile(sq), s), NotSmooth);
}

TEST_CASE("R_h estimate with T = V") {
    const Graph g = complete(6);
    const SpectralSummary s = expansion(g);
    const BetrayalSpec f = BetrayalSpec::best_of(3);
    const CheckResult r = check_lemma_3_3(g, set_of(6, {1, 2}), VertexSet::full(6), f, derive_profile(f), s);
    CHECK(r.lhs <= 1e-15);
    CHECK(r.bound == 0.0);
    CHECK(r.pass);
}

TEST_CASE("moment bounds on trivial instances") {
    const Graph g = complete(10, true);
    const SpectralSummary s = expansion(g);
    const BetrayalSpec f = BetrayalSpec::best_of(3);
    const UpdatingProfile p = derive_profile(f);

    const CheckResult empty = check_lemma_3_4(g, VertexSet(10), f, p, s);
    CHECK(empty.lhs == 0.0);
    CHECK(empty.bound == 0.0);
    CHECK(empty.pass);

    const CheckResult flat = check_lemma_3_4(g, set_of(10, {0, 3, 4}), f, p, s);
    CHECK(flat.lhs <= 1e-15);

    // Balanced A on K_n with loops: Var is exactly ||pi||_2^2 g(1/2).
    const CheckResult var = check_lemma_3_5(g, set_of(10, {0, 1, 2, 3, 4}), f, p, s);
    CHECK(var.lhs <= 1e-15);
    CHECK(var.pass);
    CHECK_FALSE(var.informational);

    const CheckResult extreme = check_lemma_3_5(g, VertexSet(10), f, p, s);
    CHECK(extreme.informational);
    CHECK(extreme.lhs == doctest::Approx(0.1 * 0.25));
}

TEST_CASE("symmetric moment bounds need symmetric f") {
    const Graph g = complete(6);
    const SpectralSummary s = expansion(g);
    const BetrayalSpec bo2 = BetrayalSpec::best_of(2);
    CHECK_THROWS_AS(check_lemma_2_3(g, set_of(6, {0}), bo2, derive_profile(bo2), s), InvalidParam);
    const BetrayalSpec bo5 = BetrayalSpec::best_of(5);
    const auto both = check_lemma_2_3(g, set_of(6, {0, 1}), bo5, derive_profile(bo5), s);
    CHECK(both[0].name == "lemma_2_3_mean");
    CHECK(both[1].name == "lemma_2_3_variance");
    CHECK(both[0].pass);
    CHECK(both[1].pass);
}

TEST_CASE("tolerance policy") {
    SpectralSummary s;
    s.tol = 0.0;
    CHECK(make_result("x", 1.0 + 5e-7, 1.0, s).pass);
    CHECK_FALSE(make_result("x", 1.0 + 5e-6, 1.0, s).pass);
    CHECK(make_result("x", 5e-13, 0.0, s).pass);
    CHECK_FALSE(make_result("x", 5e-12, 0.0, s).pass);
    s.tol = 1e-6;
    CHECK(make_result("x", 1.0 + 5e-6, 1.0, s).pass);
}

TEST_CASE("small corpus") {
    CorpusOptions opts;
    opts.instances = 60;
    opts.seed = 3;
    const auto results = run_corpus(CheckSuite::All, opts);
    CHECK(count_failures(results) == 0);
    std::map<std::string, int> per;
    for (const auto& r : results) per[r.name] += r.informational ? 0 : 1;
    for (const char* name : {"mixing", "weighted_deviation", "lemma_3_2", "lemma_3_3", "lemma_3_4",
                             "lemma_3_5", "lemma_2_3_mean", "lemma_2_3_variance"}) {
        CHECK(per[name] == 60);
    }
    // deterministic in the seed
    const auto again = run_corpus(CheckSuite::Mixing, opts);
    const auto mixing_only = std::vector<CheckResult>(results.begin(), results.begin() + 120);
    REQUIRE(again.size() == mixing_only.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].lhs == mixing_only[i].lhs);
        CHECK(again[i].instance.seed == mixing_only[i].instance.seed);
    }

    std::ostringstream csv;
    write_csv(csv, again);
    CHECK(csv.str().rfind("name,lhs,bound,slack,pass,informational,graph,sets,function,seed\n", 0) == 0);
    CHECK(parse_suite("q_h") == CheckSuite::QH);
    CHECK_THROWS_AS(parse_suite("everything"), InvalidParam);
}
