// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Test-side reference implementations and generators. Nothing here calls
// the algorithm it is used to check.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aimc/gadgets.hpp"
#include "aimc/graph.hpp"
#include "aimc/model.hpp"

namespace aimc::testing {

/// Small deterministic generator (splitmix64).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Uniform in [lo, hi].
    long range(long lo, long hi);
    bool coin() { return next() & 1; }
    /// Rational in [lo, hi] on a grid of the given denominator.
    Rational rational(const Rational& lo, const Rational& hi, long den);
    /// Positive weights with denominators dividing den, summing to one.
    std::vector<Rational> split_unit(std::size_t parts, long den);

  private:
    std::uint64_t state_;
};

std::vector<std::string> vertex_names(std::size_t n);

/// Random stochastic chain on n vertices; roughly `sinks` absorbing vertices.
MarkovChain random_chain(Rng& rng, std::size_t n, std::size_t max_support, std::size_t sinks);

/// Random chain whose edges only go forward (plus absorbing last vertices);
/// suitable for path enumeration.
MarkovChain random_acyclic_chain(Rng& rng, std::size_t n);

/// Sum over all s->t paths of the product of probabilities. Requires the
/// chain to be acyclic apart from self-loops on vertices with no other edge.
Rational path_sum(const MarkovChain& chain, VertexId s, VertexId t);

/// P = 1 iff every bottom SCC reachable from s after making t absorbing is {t}.
bool bscc_prob_one(const MarkovChain& chain, VertexId s, VertexId t);

bool truth_table_sat(const gadgets::Cnf& cnf);

/// Chain obtained by assigning a value to every declared transition.
MarkovChain instantiate(const AimcModel& model, const std::function<Rational(Edge, const Interval&)>& value);

/// Random epsilon-known model: uncertain rows carry one gridded edge and a
/// slack edge whose interval exactly complements it, so every grid value is
/// feasible. Rows never share classes.
struct RandomModel {
    AimcModel model;
    Query query;
};
RandomModel random_eps_known_model(Rng& rng, std::size_t n, std::size_t uncertain_rows, const Rational& width_cap);

/// Random model with fixed W rows, uncertain rows and occasional cross-row
/// ties, strict bounds and zero-admitting intervals; every uncertain row keeps
/// a single-member edge so the sampler can complete rows.
RandomModel random_aimc(Rng& rng, std::size_t n);

/// Random polynomial with at most `vars` variables and total degree <= degree.
Polynomial random_polynomial(Rng& rng, std::size_t vars, unsigned degree, long coef_bound);

} // namespace aimc::testing
