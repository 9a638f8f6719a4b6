// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <set>

#include "aimc/graph.hpp"
#include "aimc/model.hpp"

namespace aimc::qual {

struct KnownVerdict {
    bool prob_one = false;
    bool prob_zero = false;
};

/// Qualitative reachability on a fixed structure g.
KnownVerdict qual_known(const graph::Digraph& g, VertexId s, VertexId t);

/// A refinement whose support is exactly `edges`, if one exists.
std::optional<MarkovChain> realizable_structure(const AimcModel& model, const std::set<Edge>& edges);

/// Any refinement of the model, if the model has one.
std::optional<MarkovChain> find_refinement(const AimcModel& model);

struct QualAnswer {
    bool decision = false;
    std::optional<graph::Digraph> witness_structure;
    std::optional<MarkovChain> witness_chain;
    std::uint64_t structures_explored = 0;
};

/// Decides whether some refinement has P(source ->> target) ~ threshold for
/// threshold in {0,1}. Throws PreconditionError otherwise.
QualAnswer qual_decide(const AimcModel& model, const Query& q);

} // namespace aimc::qual
