// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/exact.hpp"

#include "aimc/error.hpp"
#include "aimc/graph.hpp"

namespace aimc::exact {

std::vector<Rational> solve_linear(SparseRows a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw SolverError("linear system has mismatched dimensions");
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = i;
    }
    // Forward elimination. perm[k] is the row holding pivot column k.
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = n;
        for (std::size_t r = k; r < n; ++r) {
            auto it = a[perm[r]].find(k);
            if (it != a[perm[r]].end() && !it->second.is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot == n) {
            throw SolverError("singular linear system");
        }
        std::swap(perm[k], perm[pivot]);
        const std::size_t pr = perm[k];
        const Rational inv = a[pr].at(k).reciprocal();
        for (auto& [col, v] : a[pr]) {
            v *= inv;
        }
        b[pr] *= inv;
        for (std::size_t r = k + 1; r < n; ++r) {
            auto& row = a[perm[r]];
            auto it = row.find(k);
            if (it == row.end()) {
                continue;
            }
            const Rational factor = it->second;
            row.erase(it);
            for (const auto& [col, v] : a[pr]) {
                if (col == k) {
                    continue;
                }
                Rational& cell = row[col];
                cell -= factor * v;
                if (cell.is_zero()) {
                    row.erase(col);
                }
            }
            b[perm[r]] -= factor * b[pr];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t pr = perm[k];
        Rational v = b[pr];
        for (const auto& [col, c] : a[pr]) {
            if (col > k) {
                v -= c * x[col];
            }
        }
        x[k] = v;
    }
    return x;
}

ReachVector reach_prob_rows(const std::vector<MarkovChain::Row>& rows, VertexId t) {
    const std::size_t n = rows.size();
    if (t >= n) {
        throw ModelError("unknown vertex " + std::to_string(t));
    }
    std::vector<Edge> edges;
    for (VertexId v = 0; v < n; ++v) {
        for (const auto& [u, p] : rows[v]) {
            if (!p.is_zero()) {
                edges.push_back({v, u});
            }
        }
    }
    const auto reaches = graph::can_reach(graph::Digraph(n, edges), t);

    std::vector<std::size_t> index(n, n);
    std::vector<VertexId> unknowns;
    for (VertexId v = 0; v < n; ++v) {
        if (reaches[v] && v != t) {
            index[v] = unknowns.size();
            unknowns.push_back(v);
        }
    }
    SparseRows a(unknowns.size());
    std::vector<Rational> b(unknowns.size());
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
        a[i][i] = Rational(1);
        for (const auto& [u, p] : rows[unknowns[i]]) {
            if (u == t) {
                b[i] += p;
            } else if (index[u] != n) {
                Rational& cell = a[i][index[u]];
                cell -= p;
                if (cell.is_zero()) {
                    a[i].erase(index[u]);
                }
            }
        }
    }
    const auto x = solve_linear(std::move(a), std::move(b));
    ReachVector out(n, Rational(0));
    out[t] = Rational(1);
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
        out[unknowns[i]] = x[i];
    }
    return out;
}

ReachVector reach_prob_all(const MarkovChain& mc, VertexId t) {
    std::vector<MarkovChain::Row> rows;
    rows.reserve(mc.size());
    for (VertexId v = 0; v < mc.size(); ++v) {
        rows.push_back(mc.row(v));
    }
    return reach_prob_rows(rows, t);
}

Rational reach_prob(const MarkovChain& mc, VertexId s, VertexId t) {
    if (s >= mc.size()) {
        throw ModelError("unknown vertex " + std::to_string(s));
    }
    if (s == t) {
        return Rational(1);
    }
    return reach_prob_all(mc, t)[s];
}

} // namespace aimc::exact
