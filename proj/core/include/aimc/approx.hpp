// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "aimc/error.hpp"
#include "aimc/model.hpp"

namespace aimc::approx {

/// Rational grid step: eps_struct * eps_gap / (2n (1 + eps_gap)), divided by
/// max(1, k_max). Throws PreconditionError for nonpositive inputs.
Rational grid_spacing(const Rational& eps_struct, const Rational& eps_gap, std::size_t n, std::size_t k_max);

/// The undivided step eps_struct * eps_gap / (2n (1 + eps_gap)).
Rational base_spacing(const Rational& eps_struct, const Rational& eps_gap, std::size_t n);

/// (1 + d/(eps - d))^(2n) - 1, the bound on |P1 - P2| for structurally
/// equivalent chains at distance d. Throws unless 0 <= d < eps.
Rational robustness_bound(const Rational& eps_struct, const Rational& d, std::size_t n);

/// Decides (1+x)^r <= 1 + r x for r = r_num / r_den exactly, via integer
/// powers. Requires x >= -1 and 0 <= r_num <= r_den, r_den > 0.
bool check_magic_inequality(const Rational& x, long r_num, long r_den);

/// Grid points per gridded constraint class and the residual edge of every
/// uncertain row.
struct GridSpec {
    Rational spacing;
    std::map<std::size_t, std::vector<Rational>> class_points;
    std::map<VertexId, Edge> slack_edge;
    std::size_t k_max = 0;
};

/// Ascending grid over an interval: attainable endpoints (strict ones pulled
/// inward by spacing/2) with consecutive gaps of at most `spacing`.
std::vector<Rational> grid_points(const Interval& iv, const Rational& spacing);

/// Designates slack edges and computes k_max. Throws PreconditionError
/// "no slack edge" when an uncertain row has only cross-row or shared
/// uncertain edges.
GridSpec plan_grid(const AimcModel& model);

/// Fills in the points of a plan at the given spacing.
void fill_grid(const AimcModel& model, GridSpec& spec, const Rational& spacing);

/// Plan plus spacing derived from the model's structural bound and eps_gap.
/// Requires epsilon-known structure.
GridSpec make_grid(const AimcModel& model, const Rational& eps_gap);

/// Index space of grid chains in lexicographic order over class grid
/// indices (first class most significant).
class GridEnumerator {
  public:
    GridEnumerator(const AimcModel& model, GridSpec spec);

    mpz_class cardinality() const;
    const GridSpec& spec() const { return spec_; }
    /// Chain at the given index, or nothing if some residual leaves its
    /// interval.
    std::optional<MarkovChain> chain_at(std::uint64_t index) const;
    /// Chain for explicit class values (one per gridded class, in class order).
    std::optional<MarkovChain> chain_for(const std::map<std::size_t, Rational>& values) const;

  private:
    const AimcModel& model_;
    GridSpec spec_;
    std::vector<std::size_t> order_;
    std::map<Edge, Rational> fixed_;
    std::map<std::size_t, Interval> class_interval_;
    std::vector<std::pair<Edge, std::size_t>> class_edges_;
};

/// Every grid chain, in enumeration order. Requires epsilon-known structure.
std::vector<MarkovChain> grid_refinements(const AimcModel& model, const GridSpec& spec);

/// Rounds a refinement to the grid: gridded classes to the nearest point
/// (lower on ties), slack edges to their residuals.
std::optional<MarkovChain> nearest_grid_chain(const AimcModel& model, const GridSpec& spec,
                                              const MarkovChain& chain);

enum class Decision { Accept, Reject };

struct ApproxOptions {
    std::uint64_t budget = 10'000'000;
    unsigned jobs = 1;
};

struct ApproxAnswer {
    Decision decision = Decision::Reject;
    std::optional<MarkovChain> witness;
    std::optional<Rational> witness_prob;
    /// Least accepting index + 1 on Accept, the grid cardinality on Reject.
    std::uint64_t grid_chains_visited = 0;
    std::uint64_t grid_cardinality = 0;
    Rational spacing;
    Rational epsilon_struct;
};

/// Thrown when the grid exceeds the configured budget.
class BudgetExceeded : public PreconditionError {
  public:
    BudgetExceeded(mpz_class cardinality, std::uint64_t budget);
    const mpz_class& cardinality() const { return cardinality_; }

  private:
    mpz_class cardinality_;
};

/// Promise decision: Accept iff some grid chain has P >= tau - eps/2 (for
/// Ge) or P <= tau + eps/2 (for Le).
ApproxAnswer approx_decide(const AimcModel& model, const Query& q, const ApproxOptions& options = {});

} // namespace aimc::approx
