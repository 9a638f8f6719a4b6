// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "aimc/approx.hpp"
#include "aimc/error.hpp"
#include "aimc/exact.hpp"
#include "aimc/graph.hpp"
#include "aimc/oracle.hpp"
#include "helpers.hpp"
#include "support.hpp"

using namespace aimc;
using namespace aimc::approx;
using namespace aimc::testing;

namespace {

// s -> t with x in [1/4, 1/2]; the wider s -> f takes the residual.
AimcModel one_row() {
    AimcModel::Builder b;
    b.transition("s", "t", Interval::closed(R("1/4"), R("1/2")));
    b.transition("s", "f", Interval::closed(R("1/4"), R("3/4")));
    b.transition("t", "t", Rational(1)).transition("f", "f", Rational(1));
    return b.build();
}

Rational distance(const MarkovChain& a, const MarkovChain& b) {
    Rational d;
    for (VertexId v = 0; v < a.size(); ++v) {
        for (VertexId u = 0; u < a.size(); ++u) {
            d = max(d, (a.prob({v, u}) - b.prob({v, u})).abs());
        }
    }
    return d;
}

} // namespace

TEST_SUITE("approx") {

TEST_CASE("grid spacing") {
    CHECK(base_spacing(R("1/4"), R("1/2"), 4) == R("1/96"));
    CHECK(grid_spacing(R("1/4"), R("1/2"), 4, 1) == R("1/96"));
    CHECK(grid_spacing(R("1/4"), R("1/2"), 4, 0) == R("1/96"));
    CHECK(grid_spacing(R("1/4"), R("1/2"), 4, 3) == R("1/288"));
    Rational prev = grid_spacing(R("1/4"), R("1"), 4, 1);
    for (long k = 2; k < 40; ++k) {
        const Rational h = grid_spacing(R("1/4"), Rational(1, k), 4, 1);
        CHECK(h < prev);
        prev = h;
    }
    CHECK_THROWS_AS(grid_spacing(R("0"), R("1/2"), 4, 1), PreconditionError);
    CHECK_THROWS_AS(grid_spacing(R("1/4"), R("-1/2"), 4, 1), PreconditionError);
}

TEST_CASE("robustness bound") {
    CHECK(robustness_bound(R("1/3"), 0, 5) == 0);
    CHECK(robustness_bound(R("1/2"), R("1/4"), 1) == 3);
    CHECK(robustness_bound(R("1/4"), R("1/96"), 4) <= R("1/2"));
    CHECK_THROWS_AS(robustness_bound(R("1/4"), R("1/4"), 4), PreconditionError);
}

TEST_CASE("magic inequality") {
    CHECK(check_magic_inequality(0, 1, 3));
    CHECK(check_magic_inequality(R("5/7"), 4, 4));
    CHECK(check_magic_inequality(1, 1, 2));
    CHECK(check_magic_inequality(-1, 1, 2));
    CHECK_THROWS_AS(check_magic_inequality(R("-3/2"), 1, 2), PreconditionError);
    CHECK_THROWS_AS(check_magic_inequality(1, 3, 2), PreconditionError);
}

TEST_CASE("grid points") {
    CHECK(grid_points(Interval::closed(R("1/4"), R("1/2")), R("1/8")) ==
          std::vector<Rational>{R("1/4"), R("3/8"), R("1/2")});
    const auto strict = grid_points(Interval{R("1/4"), true, R("1/2"), true}, R("1/8"));
    CHECK(strict.front() == R("5/16"));
    CHECK(strict.back() == R("7/16"));
    const auto pts = grid_points(Interval::closed(R("1/7"), R("5/6")), R("1/10"));
    CHECK(pts.front() == R("1/7"));
    CHECK(pts.back() == R("5/6"));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i] > pts[i - 1]);
        CHECK(pts[i] - pts[i - 1] <= R("1/10"));
    }
    CHECK(grid_points(Interval::point(R("1/3")), R("1/10")) == std::vector<Rational>{R("1/3")});
}

TEST_CASE("grid refinements") {
    SUBCASE("one uncertain row") {
        const auto m = one_row();
        auto spec = plan_grid(m);
        fill_grid(m, spec, R("1/8"));
        const auto chains = grid_refinements(m, spec);
        REQUIRE(chains.size() == 3);
        CHECK(chains[0].prob({0, 1}) == R("1/4"));
        CHECK(chains[1].prob({0, 1}) == R("3/8"));
        CHECK(chains[2].prob({0, 1}) == R("1/2"));
        for (const auto& c : chains) {
            CHECK(refines(c, m));
        }
    }
    SUBCASE("fully determined") {
        const auto m = load("fixed.json").model;
        auto spec = plan_grid(m);
        fill_grid(m, spec, R("1/8"));
        CHECK(grid_refinements(m, spec).size() == 1);
    }
    SUBCASE("square-root gadget follows the x grid") {
        const auto m = load("sqrtsum_r4.json").model;
        auto spec = plan_grid(m);
        CHECK(spec.slack_edge.size() == 7);
        fill_grid(m, spec, R("1/8"));
        REQUIRE(spec.class_points.size() == 1);
        CHECK(spec.class_points.begin()->second.size() == 7);
        const auto chains = grid_refinements(m, spec);
        CHECK(chains.size() == 7);
        for (const auto& c : chains) {
            CHECK(refines(c, m));
        }
    }
}

TEST_CASE("rows without a slack edge are rejected") {
    AimcModel::Builder b;
    b.transition("s", "a", Interval::closed(R("1/4"), R("3/4")));
    b.transition("s", "b", Interval::closed(R("1/4"), R("3/4")));
    b.transition("a", "s", Interval::closed(R("1/4"), R("3/4")));
    b.transition("a", "b", Interval::closed(R("1/4"), R("3/4")));
    b.transition("b", "b", Rational(1));
    b.tie("s", "a", "a", "s").tie("s", "b", "a", "b");
    const auto m = b.build();
    CHECK_THROWS_WITH_AS(plan_grid(m), doctest::Contains("no slack edge"), PreconditionError);
}

TEST_CASE("approx_decide on the square-root fixture") {
    const auto doc = load("sqrtsum_r4.json");
    Query q = *doc.query;
    q.promise_gap = R("1/20");
    q.threshold = R("59/432") - R("1/20");
    const auto accept = approx_decide(doc.model, q);
    CHECK(accept.decision == Decision::Accept);
    REQUIRE(accept.witness);
    CHECK(refines(*accept.witness, doc.model));
    CHECK(accept.witness_prob == exact::reach_prob(*accept.witness, q.source, q.target));
    q.threshold = R("59/432") + R("1/20");
    const auto reject = approx_decide(doc.model, q);
    CHECK(reject.decision == Decision::Reject);
    CHECK_FALSE(reject.witness);
    CHECK(reject.grid_chains_visited == reject.grid_cardinality);
}

TEST_CASE("approx_decide boundary on a fixed chain") {
    const auto doc = load("fixed.json");
    Query q = *doc.query;
    q.promise_gap = R("1/1000");
    q.threshold = R("1/3");
    CHECK(approx_decide(doc.model, q).decision == Decision::Accept);
    q.relation = Relation::Le;
    CHECK(approx_decide(doc.model, q).decision == Decision::Accept);
}

TEST_CASE("approx_decide preconditions") {
    const auto doc = load("sqrtsum_r4.json");
    Query q = *doc.query;
    CHECK_THROWS_AS(approx_decide(doc.model, q), PreconditionError);
    q.promise_gap = R("1/20");
    const auto unc = load("optional.json").model;
    Query uq;
    uq.source = 0;
    uq.target = 2;
    uq.threshold = R("1/2");
    uq.promise_gap = R("1/10");
    CHECK_THROWS_AS(approx_decide(unc, uq), PreconditionError);
    ApproxOptions tiny;
    tiny.budget = 10;
    try {
        approx_decide(doc.model, q, tiny);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.cardinality() > 10);
        CHECK(std::string(e.what()).find("grid too large") != std::string::npos);
    }
}

TEST_CASE("witness is independent of the job count") {
    const auto doc = load("sqrtsum_r4.json");
    Query q = *doc.query;
    q.promise_gap = R("1/20");
    q.threshold = R("1/10");
    std::optional<ApproxAnswer> first;
    for (unsigned jobs : {1u, 2u, 3u, 5u}) {
        const auto ans = approx_decide(doc.model, q, {10'000'000, jobs});
        if (!first) {
            first = ans;
            continue;
        }
        CHECK(ans.decision == first->decision);
        CHECK(ans.witness == first->witness);
        CHECK(ans.grid_chains_visited == first->grid_chains_visited);
    }
}

TEST_CASE("covering: sampled refinements are near a grid chain") {
    Rng rng(71);
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        auto rm = random_eps_known_model(rng, 4 + rng.below(4), 1 + rng.below(3), R("1/3"));
        const auto st = graph::structure_status(rm.model);
        const Rational eps = R("1/4");
        const auto spec = make_grid(rm.model, eps);
        const Rational d_rat = base_spacing(*st.epsilon, eps, rm.model.size());
        oracle::Sampler sampler(rm.model, 1 << 12);
        for (std::uint64_t k = 0; k < 5; ++k) {
            const auto chain = sampler.draw(oracle::stream_seed(i, k));
            if (!chain) {
                continue;
            }
            const auto near = nearest_grid_chain(rm.model, spec, *chain);
            REQUIRE(near);
            ++checked;
            CHECK(refines(*near, rm.model));
            CHECK(distance(*near, *chain) <= d_rat);
        }
    }
    CHECK(checked > 150);
}

TEST_CASE("promise correctness against the oracle on small instances") {
    Rng rng(72);
    for (int i = 0; i < 15; ++i) {
        auto rm = random_eps_known_model(rng, 4 + rng.below(2), 1, R("1/4"));
        Query q = rm.query;
        q.promise_gap = R("1/5");
        const auto best = oracle::brute_force_opt(rm.model, q, oracle::GridMode{1}).best_prob;
        q.threshold = best + R("1/5");
        if (q.threshold <= 1) {
            CHECK(approx_decide(rm.model, q).decision == Decision::Reject);
        }
        q.threshold = best - R("1/5");
        if (q.threshold >= 0) {
            CHECK(approx_decide(rm.model, q).decision == Decision::Accept);
        }
    }
}

} // TEST_SUITE
