// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "aimc/model.hpp"

namespace aimc::graph {

/// Directed graph over vertices 0..n-1 with sorted, duplicate-free
/// successor lists.
class Digraph {
  public:
    explicit Digraph(std::size_t n = 0) : succ_(n) {}
    Digraph(std::size_t n, const std::vector<Edge>& edges);

    std::size_t size() const { return succ_.size(); }
    const std::vector<VertexId>& successors(VertexId v) const { return succ_.at(v); }
    bool has_edge(Edge e) const;
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

  private:
    std::vector<std::vector<VertexId>> succ_;
};

/// Underlying graph of nonzero transitions.
Digraph structure_of(const MarkovChain& chain);

/// Edges that are positive in at least one refinement (interval admits a
/// positive value).
Digraph union_graph(const AimcModel& model);

/// Sorted set of vertices reachable from s, including s.
std::vector<VertexId> reachable_from(const Digraph& g, VertexId s);

/// Membership vector of vertices reachable from s without leaving through
/// `blocked` (blocked itself is marked when reached, but not expanded).
std::vector<bool> reachable_avoiding(const Digraph& g, VertexId s, std::optional<VertexId> blocked);

/// Membership vector of vertices that can reach t.
std::vector<bool> can_reach(const Digraph& g, VertexId t);

/// Strongly connected components, each sorted, ordered by least member.
std::vector<std::vector<VertexId>> strongly_connected_components(const Digraph& g);

/// SCCs with no edge leaving them, ordered by least member.
std::vector<std::vector<VertexId>> bottom_sccs(const Digraph& g);

enum class StructureKind { Known, EpsilonKnown, Uncertain };

const char* kind_name(StructureKind kind);

/// Classification of a model's refinement structures. For known structures
/// `graph` holds the shared structure; EpsilonKnown adds the certified
/// positive lower bound. Uncertain models list the optional edges whose
/// interval contains both 0 and a positive value.
struct StructureStatus {
    StructureKind kind = StructureKind::Known;
    std::optional<Digraph> graph;
    std::optional<Rational> epsilon;
    std::vector<Edge> optional_edges;
};

StructureStatus structure_status(const AimcModel& model);

} // namespace aimc::graph
