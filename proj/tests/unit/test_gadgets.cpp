// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "aimc/error.hpp"
#include "aimc/exact.hpp"
#include "aimc/gadgets.hpp"
#include "aimc/graph.hpp"
#include "aimc/oracle.hpp"
#include "helpers.hpp"
#include "support.hpp"

using namespace aimc;
using namespace aimc::gadgets;
using namespace aimc::testing;

namespace {

Polynomial x(std::size_t i) { return Polynomial::variable(i); }

MarkovChain gadget_at(const AimcModel& m, const Rational& value) {
    const auto cc = constraint_classes(m);
    return instantiate(m, [&](Edge e, const Interval& iv) {
        if (iv.is_singleton()) {
            return iv.lo;
        }
        return cc[*cc.class_of(e)].members.size() > 1 ? value : Rational(1) - value;
    });
}

} // namespace

TEST_SUITE("gadgets") {

TEST_CASE("DIMACS parsing") {
    const auto cnf = parse_dimacs(read_file(data_path("sat.cnf")));
    CHECK(cnf.num_vars == 3);
    REQUIRE(cnf.clauses.size() == 3);
    CHECK(cnf.clauses[0] == std::array<int, 3>{1, 2, -3});
    CHECK(cnf.clauses[1] == std::array<int, 3>{-1, 2, 2});
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2 -1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), ParseError);
}

TEST_CASE("3-SAT encoder shape") {
    const auto one = encode_3sat({1, {{1, 1, 1}}});
    CHECK(one.model.size() == 7);
    CHECK(validate(one.model).empty());
    std::set<std::pair<Edge, Edge>> ties;
    for (auto [a, b] : one.model.constraints()) {
        ties.insert({std::min(a, b), std::max(a, b)});
    }
    const auto& m = one.model;
    const Edge v0x1{m.index_of("v0"), m.index_of("x1")};
    const Edge x1v1{m.index_of("x1"), m.index_of("v1")};
    const Edge nx1f{m.index_of("nx1"), m.index_of("F")};
    CHECK(ties.size() == 2);
    CHECK(ties.contains({std::min(v0x1, x1v1), std::max(v0x1, x1v1)}));
    CHECK(ties.contains({std::min(v0x1, nx1f), std::max(v0x1, nx1f)}));
    CHECK(one.query.source == m.index_of("v0"));
    CHECK(one.query.target == m.index_of("S"));
    CHECK(one.query.threshold == 1);

    const auto two = encode_3sat({2, {{1, 2, 2}, {-1, -2, 1}}});
    CHECK(two.model.size() == 11);
    const auto v2 = two.model.index_of("v2");
    CHECK(two.model.row(v2).size() == 3);
    for (const Edge& e : two.model.row(v2)) {
        CHECK(two.model.interval(e) == Interval::point(R("1/3")));
    }
    for (const char* sink : {"S", "F"}) {
        const auto v = two.model.index_of(sink);
        CHECK(two.model.interval({v, v}) == Interval::point(1));
    }
}

TEST_CASE("square-root encoder parameters") {
    const auto fx = encode_sqrtsum({4}, 1, {4, 32, R("1/8"), R("7/8")});
    CHECK(fx.params.alpha == R("1/2"));
    CHECK(fx.params.beta == std::vector<Rational>{R("8/27")});
    CHECK(fx.params.threshold == R("1/32") + R("8/27") / 4);
    CHECK(fx.model.size() == 15);
    CHECK(validate(fx.model).empty());
    CHECK(graph::structure_status(fx.model).kind == graph::StructureKind::EpsilonKnown);

    const auto def = encode_sqrtsum({4, 9}, 5);
    CHECK(def.params.M == 10);
    CHECK(def.params.N == 16000);
    CHECK(def.params.x_interval == Interval::closed(R("1/20"), R("1/2")));
    CHECK(def.params.alpha == R("4") * 10 / 16000);
    CHECK(def.params.threshold == R("5") / (2 * 16000) + (def.params.beta[0] + def.params.beta[1]) / 8);
    CHECK(def.model.size() == 2 * 12 + 3);
    CHECK(validate(def.model).empty());

    CHECK_THROWS_AS(encode_sqrtsum({4}, 1, {4, 32, std::nullopt, std::nullopt}), PreconditionError);
    CHECK_THROWS_AS(encode_sqrtsum({0}, 1), PreconditionError);
}

TEST_CASE("single-gadget reachability polynomial") {
    const auto fx = encode_sqrtsum({4}, 1, {4, 32, R("1/8"), R("7/8")});
    const auto& m = fx.model;
    const auto a = m.index_of("a");
    const auto s = m.index_of("S");
    for (long k = 0; k < 20; ++k) {
        const Rational xv = R("1/8") + Rational(k, 19) * R("3/4");
        const Rational expect = (fx.params.alpha * xv - fx.params.beta[0] * xv.pow(3) + fx.params.beta[0]) / 4;
        CHECK(exact::reach_prob(gadget_at(m, xv), a, s) == expect);
        CHECK(sqrtsum_gadget_value(fx.params.alpha, fx.params.beta[0], xv) == expect);
    }
    CHECK(exact::reach_prob(gadget_at(m, R("3/4")), a, s) == R("59/432"));
}

TEST_CASE("perfect squares decide the square-root sum") {
    for (const auto& [rs, k] : std::vector<std::pair<std::vector<long>, long>>{{{1}, 1}, {{1}, 2}, {{4, 1}, 3}, {{4, 1}, 4}}) {
        const auto inst = encode_sqrtsum(rs, k);
        // Resolution M-1 over [1/(2M), 1/2] yields every j/(2M), so each x* = 3 sqrt(r)/(2M) is a grid point.
        const long M = inst.params.M;
        Query q = inst.query;
        const auto res = oracle::brute_force_opt(inst.model, q, oracle::GridMode{static_cast<std::uint64_t>(M - 1)});
        long sum = 0;
        for (long r : rs) {
            long root = 0;
            while ((root + 1) * (root + 1) <= r) {
                ++root;
            }
            sum += root;
        }
        CHECK((res.best_prob >= inst.params.threshold) == (sum >= k));
    }
}

TEST_CASE("polynomial rewriting examples") {
    const auto lin = rewrite_polynomial(x(0));
    CHECK(lin.offset == 0);
    CHECK(lin.scale == 1);
    REQUIRE(lin.terms.size() == 1);
    CHECK(lin.terms[0].alpha == 1);
    CHECK(lin.terms[0].factors == std::vector<Factor>{{0, false}});

    const auto comp = rewrite_polynomial(Polynomial::constant(1) - x(0));
    CHECK(comp.offset == 0);
    CHECK(comp.scale == 1);
    REQUIRE(comp.terms.size() == 1);
    CHECK(comp.terms[0].factors == std::vector<Factor>{{0, true}});

    const Polynomial cubic = Rational(-2) * x(0) * x(1) * x(2);
    const auto enc = rewrite_polynomial(cubic);
    CHECK(enc.offset == -2);
    CHECK(enc.terms.size() == 3);
    CHECK(enc.scale == 6);
    Rational total;
    for (const auto& t : enc.terms) {
        CHECK(t.alpha > 0);
        CHECK(t.alpha <= 1);
        CHECK_FALSE(t.factors.empty());
        total += t.alpha;
    }
    CHECK(total <= 1);
    CHECK(enc.expand() == cubic);

    const auto zero = rewrite_polynomial(Polynomial::constant(R("3/2")));
    CHECK(zero.terms.empty());
    CHECK(zero.offset == R("3/2"));
}

TEST_CASE("expansion identity on random polynomials") {
    Rng rng(81);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_polynomial(rng, 3, 3, 5);
        const auto enc = rewrite_polynomial(p);
        CHECK(enc.expand() == p);
        CHECK(enc.scale > 0);
        Rational total;
        for (const auto& t : enc.terms) {
            CHECK(t.alpha > 0);
            total += t.alpha;
        }
        CHECK(total <= 1);
    }
}

TEST_CASE("polynomial encoder") {
    const auto lin = parse_poly_problem(read_file(data_path("poly_x1.json")));
    const auto inst = encode_polynomial(lin, R("1/2"));
    CHECK(inst.model.size() == 4);
    CHECK(validate(inst.model).empty());
    const auto best = oracle::brute_force_opt(inst.model, inst.query, oracle::GridMode{4});
    CHECK(best.best_prob == 1);

    const auto bump = parse_poly_problem(read_file(data_path("poly_bump.json")));
    const auto enc = rewrite_polynomial(bump.poly);
    const auto at = encode_polynomial(bump, R("1/4"));
    const auto res = oracle::brute_force_opt(at.model, at.query, oracle::GridMode{4});
    CHECK(res.best_prob * enc.scale + enc.offset == R("1/4"));
    CHECK(res.best_prob >= at.query.threshold);
    const auto above = encode_polynomial(bump, R("1/4") + R("1/100"));
    CHECK(res.best_prob < above.query.threshold);

    const auto neg = parse_poly_problem(read_file(data_path("poly_neg_cubic.json")));
    CHECK(neg.intervals.size() == 3);
    const auto ni = encode_polynomial(neg, 0);
    const auto nres = oracle::brute_force_opt(ni.model, ni.query, oracle::GridMode{2});
    const auto nenc = rewrite_polynomial(neg.poly);
    CHECK(nres.best_prob * nenc.scale + nenc.offset == 0);

    CHECK_THROWS_WITH_AS(encode_polynomial(lin, 2), doctest::Contains("trivially false"), PreconditionError);
    CHECK_THROWS_WITH_AS(encode_polynomial(lin, -1), doctest::Contains("trivially true"), PreconditionError);
}

} // TEST_SUITE
