// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "aimc/model.hpp"

namespace aimc::exact {

/// Probability of eventually reaching the target, indexed by vertex.
using ReachVector = std::vector<Rational>;

/// Sparse square system: row i holds (column, coefficient) pairs.
using SparseRows = std::vector<std::map<std::size_t, Rational>>;

/// Solves A x = b exactly by Gaussian elimination, pivoting on the diagonal
/// when possible and otherwise on the first usable row in index order.
/// Throws SolverError if A is singular.
std::vector<Rational> solve_linear(SparseRows a, std::vector<Rational> b);

/// Reachability over arbitrary nonnegative sparse rows (rows need not sum to
/// one). Vertices without a path to t get 0; the remaining system is solved
/// exactly.
ReachVector reach_prob_rows(const std::vector<MarkovChain::Row>& rows, VertexId t);

ReachVector reach_prob_all(const MarkovChain& mc, VertexId t);
Rational reach_prob(const MarkovChain& mc, VertexId s, VertexId t);

} // namespace aimc::exact
