// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "aimc/error.hpp"

namespace aimc::graph {

Digraph::Digraph(std::size_t n, const std::vector<Edge>& edges) : succ_(n) {
    for (const Edge& e : edges) {
        if (e.from >= n || e.to >= n) {
            throw ModelError("edge references a vertex outside the graph");
        }
        succ_[e.from].push_back(e.to);
    }
    for (auto& s : succ_) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
}

bool Digraph::has_edge(Edge e) const {
    const auto& s = succ_.at(e.from);
    return std::binary_search(s.begin(), s.end(), e.to);
}

std::vector<Edge> Digraph::edges() const {
    std::vector<Edge> out;
    for (VertexId v = 0; v < succ_.size(); ++v) {
        for (VertexId u : succ_[v]) {
            out.push_back({v, u});
        }
    }
    return out;
}

std::size_t Digraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& s : succ_) {
        n += s.size();
    }
    return n;
}

Digraph structure_of(const MarkovChain& chain) {
    std::vector<Edge> edges;
    for (VertexId v = 0; v < chain.size(); ++v) {
        for (const auto& [to, p] : chain.row(v)) {
            edges.push_back({v, to});
        }
    }
    return Digraph(chain.size(), edges);
}

Digraph union_graph(const AimcModel& model) {
    const ConstraintClasses classes = constraint_classes(model);
    std::vector<Edge> edges;
    for (const auto& [e, iv] : model.transitions()) {
        if (classes.effective_interval(model, e).admits_positive()) {
            edges.push_back(e);
        }
    }
    return Digraph(model.size(), edges);
}

std::vector<bool> reachable_avoiding(const Digraph& g, VertexId s, std::optional<VertexId> blocked) {
    if (s >= g.size()) {
        throw ModelError("unknown vertex " + std::to_string(s));
    }
    std::vector<bool> seen(g.size(), false);
    std::deque<VertexId> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        if (blocked && v == *blocked) {
            continue;
        }
        for (VertexId u : g.successors(v)) {
            if (!seen[u]) {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

std::vector<VertexId> reachable_from(const Digraph& g, VertexId s) {
    const auto seen = reachable_avoiding(g, s, std::nullopt);
    std::vector<VertexId> out;
    for (VertexId v = 0; v < seen.size(); ++v) {
        if (seen[v]) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<bool> can_reach(const Digraph& g, VertexId t) {
    if (t >= g.size()) {
        throw ModelError("unknown vertex " + std::to_string(t));
    }
    std::vector<std::vector<VertexId>> pred(g.size());
    for (VertexId v = 0; v < g.size(); ++v) {
        for (VertexId u : g.successors(v)) {
            pred[u].push_back(v);
        }
    }
    std::vector<bool> seen(g.size(), false);
    std::deque<VertexId> queue{t};
    seen[t] = true;
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        for (VertexId u : pred[v]) {
            if (!seen[u]) {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

std::vector<std::vector<VertexId>> strongly_connected_components(const Digraph& g) {
    // Iterative Tarjan; roots are tried in vertex order.
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = g.size();
    std::vector<std::size_t> order(n, unvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<VertexId> stack;
    std::vector<std::vector<VertexId>> sccs;
    std::size_t next = 0;

    struct Frame {
        VertexId v;
        std::size_t child;
    };
    std::vector<Frame> calls;

    for (VertexId root = 0; root < n; ++root) {
        if (order[root] != unvisited) {
            continue;
        }
        calls.push_back({root, 0});
        order[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!calls.empty()) {
            Frame& f = calls.back();
            const auto& succ = g.successors(f.v);
            if (f.child < succ.size()) {
                const VertexId u = succ[f.child++];
                if (order[u] == unvisited) {
                    order[u] = low[u] = next++;
                    stack.push_back(u);
                    on_stack[u] = true;
                    calls.push_back({u, 0});
                } else if (on_stack[u]) {
                    low[f.v] = std::min(low[f.v], order[u]);
                }
                continue;
            }
            const VertexId v = f.v;
            calls.pop_back();
            if (!calls.empty()) {
                low[calls.back().v] = std::min(low[calls.back().v], low[v]);
            }
            if (low[v] == order[v]) {
                std::vector<VertexId> scc;
                VertexId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc.push_back(w);
                } while (w != v);
                std::sort(scc.begin(), scc.end());
                sccs.push_back(std::move(scc));
            }
        }
    }
    std::sort(sccs.begin(), sccs.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return sccs;
}

std::vector<std::vector<VertexId>> bottom_sccs(const Digraph& g) {
    auto sccs = strongly_connected_components(g);
    std::vector<std::size_t> component(g.size());
    for (std::size_t c = 0; c < sccs.size(); ++c) {
        for (VertexId v : sccs[c]) {
            component[v] = c;
        }
    }
    std::vector<std::vector<VertexId>> out;
    for (std::size_t c = 0; c < sccs.size(); ++c) {
        const bool closed = std::all_of(sccs[c].begin(), sccs[c].end(), [&](VertexId v) {
            const auto& succ = g.successors(v);
            return std::all_of(succ.begin(), succ.end(), [&](VertexId u) { return component[u] == c; });
        });
        if (closed) {
            out.push_back(std::move(sccs[c]));
        }
    }
    return out;
}

const char* kind_name(StructureKind kind) {
    switch (kind) {
    case StructureKind::Known:
        return "known";
    case StructureKind::EpsilonKnown:
        return "epsilon-known";
    case StructureKind::Uncertain:
        return "uncertain";
    }
    return "?";
}

StructureStatus structure_status(const AimcModel& model) {
    const ConstraintClasses classes = constraint_classes(model);
    StructureStatus status;
    std::vector<Edge> mandatory;
    std::optional<Rational> epsilon;
    bool open_at_zero = false;
    for (const auto& [e, raw] : model.transitions()) {
        const Interval iv = classes.effective_interval(model, e);
        if (!iv.admits_positive()) {
            continue;
        }
        if (iv.admits_zero()) {
            status.optional_edges.push_back(e);
            continue;
        }
        mandatory.push_back(e);
        if (iv.lo.is_zero()) {
            open_at_zero = true;
        } else if (!epsilon || iv.lo < *epsilon) {
            epsilon = iv.lo;
        }
    }
    if (!status.optional_edges.empty()) {
        status.kind = StructureKind::Uncertain;
        return status;
    }
    status.graph = Digraph(model.size(), mandatory);
    if (!open_at_zero && epsilon) {
        status.kind = StructureKind::EpsilonKnown;
        status.epsilon = epsilon;
    } else {
        status.kind = StructureKind::Known;
    }
    return status;
}

} // namespace aimc::graph
