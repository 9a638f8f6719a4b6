// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aimc/model.hpp"
#include "aimc/polynomial.hpp"

namespace aimc::gadgets {

/// 3-CNF formula; literal +i is x_i, -i its negation (1-based).
struct Cnf {
    std::size_t num_vars = 0;
    std::vector<std::array<int, 3>> clauses;
};

/// DIMACS CNF reader. Clauses with one or two literals are padded by
/// repeating their last literal; longer or empty clauses are rejected.
Cnf parse_dimacs(std::string_view text);

struct Instance {
    AimcModel model;
    Query query;
};

/// Variable-setting diamonds and clause-testing branches; the query asks
/// whether v0 reaches S with probability 1.
Instance encode_3sat(const Cnf& cnf);

struct SqrtSumOptions {
    std::optional<long> M;
    std::optional<long> N;
    std::optional<Rational> x_lo;
    std::optional<Rational> x_hi;
};

struct SqrtSumParams {
    std::vector<long> r_list;
    long k = 0;
    long M = 0;
    long N = 0;
    Rational alpha;
    std::vector<Rational> beta;
    Interval x_interval;
    Rational threshold;
};

struct SqrtSumInstance {
    AimcModel model;
    Query query;
    SqrtSumParams params;
};

/// One gadget per r_i behind a uniform branch from v0. Throws
/// PreconditionError when the parameters violate the gadget's requirements.
SqrtSumInstance encode_sqrtsum(const std::vector<long>& r_list, long k, const SqrtSumOptions& options = {});

/// (alpha x - beta x^3 + beta) / 4.
Rational sqrtsum_gadget_value(const Rational& alpha, const Rational& beta, const Rational& x);

/// One factor x_var or (1 - x_var).
struct Factor {
    std::size_t var = 0;
    bool complement = false;

    friend auto operator<=>(const Factor&, const Factor&) = default;
};

struct PolyTerm {
    Rational alpha;
    std::vector<Factor> factors;
};

/// P = offset + scale * sum(alpha_i * Q_i) with positive alphas summing to at
/// most one.
struct PolyEncoding {
    Rational offset;
    Rational scale{1};
    std::vector<PolyTerm> terms;

    Polynomial expand() const;
};

PolyEncoding rewrite_polynomial(const Polynomial& p);

/// Optimization problem: is max P over the box at least tau?
struct PolyProblem {
    std::vector<std::string> vars;
    Polynomial poly;
    std::vector<Interval> intervals;
};

PolyProblem parse_poly_problem(std::string_view json_text);

/// Chain-per-term model whose maximal reach probability from v0 to S is
/// (max P - offset) / scale. Throws PreconditionError when the transformed
/// threshold leaves [0,1] (the instance is then trivially decided).
Instance encode_polynomial(const PolyProblem& problem, const Rational& tau);

} // namespace aimc::gadgets
