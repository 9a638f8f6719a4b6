// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/qualitative.hpp"

#include <cstdint>
#include <map>

#include "aimc/error.hpp"
#include "aimc/lp.hpp"

namespace aimc::qual {

KnownVerdict qual_known(const graph::Digraph& g, VertexId s, VertexId t) {
    if (s >= g.size() || t >= g.size()) {
        throw ModelError("unknown vertex");
    }
    KnownVerdict out;
    const auto from_s = graph::reachable_avoiding(g, s, t);
    out.prob_zero = !from_s[t];
    const auto to_t = graph::can_reach(g, t);
    out.prob_one = true;
    for (VertexId v = 0; v < g.size(); ++v) {
        if (from_s[v] && !to_t[v]) {
            out.prob_one = false;
            break;
        }
    }
    return out;
}

namespace {

// Edges that must share one value: a constraint class, or a lone edge.
struct Unit {
    std::vector<Edge> edges;
    Interval interval;
    bool optional = false;
};

enum class Presence { Absent, Present, Free };

struct Units {
    std::vector<Unit> units;
    std::map<Edge, std::size_t> unit_of;
};

Units build_units(const AimcModel& model) {
    const ConstraintClasses classes = constraint_classes(model);
    Units out;
    std::map<std::size_t, std::size_t> class_unit;
    for (const auto& [e, raw] : model.transitions()) {
        const Interval iv = classes.effective_interval(model, e);
        if (!iv.admits_positive()) {
            continue;
        }
        std::size_t u;
        const auto cls = classes.class_of(e);
        if (cls && class_unit.contains(*cls)) {
            u = class_unit.at(*cls);
        } else {
            u = out.units.size();
            out.units.push_back({{}, iv, iv.admits_zero()});
            if (cls) {
                class_unit[*cls] = u;
            }
        }
        out.units[u].edges.push_back(e);
        out.unit_of[e] = u;
    }
    return out;
}

// Slack-maximization LP: a refinement exists with every Present unit
// strictly positive, Absent units zero and strict bounds honored iff the
// optimal slack is positive.
std::optional<MarkovChain> realize(const AimcModel& model, const Units& units,
                                   const std::vector<Presence>& presence) {
    // Absent units are fixed at zero, so they get no column.
    std::vector<std::size_t> column(units.units.size(), SIZE_MAX);
    std::size_t k = 0;
    for (std::size_t u = 0; u < units.units.size(); ++u) {
        if (presence[u] != Presence::Absent) {
            column[u] = k++;
        }
    }
    const std::size_t sigma = k;
    lp::Problem p;
    p.num_vars = k + 1;
    p.objective.assign(k + 1, Rational(0));
    p.objective[sigma] = Rational(1);
    auto row = [&] { return std::vector<Rational>(k + 1, Rational(0)); };

    for (std::size_t u = 0; u < units.units.size(); ++u) {
        if (column[u] == SIZE_MAX) {
            continue;
        }
        const std::size_t x = column[u];
        const Interval& iv = units.units[u].interval;
        auto upper = row();
        upper[x] = Rational(1);
        if (iv.hi_strict) {
            upper[sigma] = Rational(1);
        }
        p.constraints.push_back({std::move(upper), lp::Sense::Le, iv.hi});
        if (presence[u] == Presence::Present || !iv.admits_zero()) {
            if (iv.lo.sign() > 0 || iv.lo_strict) {
                auto lower = row();
                lower[x] = Rational(1);
                if (iv.lo_strict) {
                    lower[sigma] = Rational(-1);
                }
                p.constraints.push_back({std::move(lower), lp::Sense::Ge, iv.lo});
            }
            auto positive = row();
            positive[x] = Rational(1);
            positive[sigma] = Rational(-1);
            p.constraints.push_back({std::move(positive), lp::Sense::Ge, Rational(0)});
        }
    }
    for (VertexId v = 0; v < model.size(); ++v) {
        auto c = row();
        bool any = false;
        for (const Edge& e : model.row(v)) {
            auto it = units.unit_of.find(e);
            if (it != units.unit_of.end() && column[it->second] != SIZE_MAX) {
                c[column[it->second]] += Rational(1);
                any = true;
            }
        }
        if (!any) {
            return std::nullopt;
        }
        p.constraints.push_back({std::move(c), lp::Sense::Eq, Rational(1)});
    }
    auto cap = row();
    cap[sigma] = Rational(1);
    p.constraints.push_back({std::move(cap), lp::Sense::Le, Rational(1)});

    const lp::Solution sol = lp::maximize(p);
    if (sol.status != lp::Status::Optimal || sol.value.sign() <= 0) {
        return std::nullopt;
    }
    std::map<Edge, Rational> delta;
    for (const auto& [e, u] : units.unit_of) {
        if (column[u] != SIZE_MAX && !sol.x[column[u]].is_zero()) {
            delta[e] = sol.x[column[u]];
        }
    }
    return MarkovChain(model.vertices(), delta);
}

std::vector<Presence> initial_presence(const Units& units) {
    std::vector<Presence> out;
    for (const Unit& u : units.units) {
        out.push_back(u.optional ? Presence::Free : Presence::Present);
    }
    return out;
}

graph::Digraph graph_of(const AimcModel& model, const Units& units, const std::vector<Presence>& presence,
                        bool include_free) {
    std::vector<Edge> edges;
    for (const auto& [e, u] : units.unit_of) {
        if (presence[u] == Presence::Present || (include_free && presence[u] == Presence::Free)) {
            edges.push_back(e);
        }
    }
    return graph::Digraph(model.size(), edges);
}

// Cheap necessary condition: every row touched by unit u can still sum to 1.
bool rows_feasible(const AimcModel& model, const Units& units, const std::vector<Presence>& presence,
                   std::size_t u) {
    std::set<VertexId> rows;
    for (const Edge& e : units.units[u].edges) {
        rows.insert(e.from);
    }
    for (VertexId v : rows) {
        Rational lo(0);
        Rational hi(0);
        bool lo_strict = false;
        bool hi_strict = false;
        for (const Edge& e : model.row(v)) {
            auto it = units.unit_of.find(e);
            if (it == units.unit_of.end()) {
                continue;
            }
            const Presence pr = presence[it->second];
            if (pr == Presence::Absent) {
                continue;
            }
            const Interval& iv = units.units[it->second].interval;
            hi += iv.hi;
            hi_strict = hi_strict || iv.hi_strict;
            if (pr == Presence::Present) {
                lo += iv.lo;
                lo_strict = lo_strict || iv.lo_strict || iv.lo.is_zero();
            }
        }
        const Rational one(1);
        if (lo > one || (lo_strict && lo == one) || hi < one || (hi_strict && hi == one)) {
            return false;
        }
    }
    return true;
}

struct Search {
    const AimcModel& model;
    const Units& units;
    VertexId s;
    VertexId t;
    bool want_one;
    std::uint64_t explored = 0;
    std::optional<MarkovChain> witness;

    // Presence::Free marks undecided units during the search.
    bool run(std::vector<Presence>& presence) {
        ++explored;
        const graph::Digraph present = graph_of(model, units, presence, false);
        const auto region = graph::reachable_avoiding(present, s, t);
        if (want_one) {
            const auto to_t = graph::can_reach(graph_of(model, units, presence, true), t);
            for (VertexId v = 0; v < model.size(); ++v) {
                if (region[v] && !to_t[v]) {
                    return false;
                }
            }
        } else if (region[t]) {
            return false;
        }
        auto chain = realize(model, units, presence);
        if (!chain) {
            return false;
        }
        std::optional<std::size_t> branch;
        for (std::size_t u = 0; u < units.units.size() && !branch; ++u) {
            if (!units.units[u].optional || presence[u] != Presence::Free) {
                continue;
            }
            for (const Edge& e : units.units[u].edges) {
                if (region[e.from] && e.from != t) {
                    branch = u;
                    break;
                }
            }
        }
        if (!branch) {
            // The region reachable from s is fully decided and meets the criterion.
            witness = std::move(chain);
            return true;
        }
        for (Presence choice : {Presence::Absent, Presence::Present}) {
            presence[*branch] = choice;
            if (rows_feasible(model, units, presence, *branch) && run(presence)) {
                return true;
            }
        }
        presence[*branch] = Presence::Free;
        return false;
    }
};

} // namespace

std::optional<MarkovChain> realizable_structure(const AimcModel& model, const std::set<Edge>& edges) {
    const Units units = build_units(model);
    std::vector<Presence> presence(units.units.size(), Presence::Absent);
    for (const Edge& e : edges) {
        auto it = units.unit_of.find(e);
        if (it == units.unit_of.end()) {
            return std::nullopt;
        }
        presence[it->second] = Presence::Present;
    }
    for (std::size_t u = 0; u < units.units.size(); ++u) {
        const Unit& unit = units.units[u];
        if (!unit.optional && presence[u] != Presence::Present) {
            return std::nullopt;
        }
        if (presence[u] == Presence::Present) {
            for (const Edge& e : unit.edges) {
                if (!edges.contains(e)) {
                    return std::nullopt;
                }
            }
        }
    }
    return realize(model, units, presence);
}

std::optional<MarkovChain> find_refinement(const AimcModel& model) {
    const Units units = build_units(model);
    return realize(model, units, initial_presence(units));
}

QualAnswer qual_decide(const AimcModel& model, const Query& q) {
    check_query(model, q);
    const bool zero = q.threshold.is_zero();
    const bool one = q.threshold == Rational(1);
    if (!zero && !one) {
        throw PreconditionError("qualitative queries need threshold 0 or 1, got " + q.threshold.str());
    }
    const Units units = build_units(model);
    QualAnswer answer;
    auto finish = [&](std::optional<MarkovChain> chain) {
        if (chain) {
            answer.decision = true;
            answer.witness_structure = graph::structure_of(*chain);
            answer.witness_chain = std::move(chain);
        }
        return answer;
    };

    const bool want_one = q.relation == Relation::Ge && one;
    const bool want_zero = q.relation == Relation::Le && zero;
    if (!want_one && !want_zero) {
        answer.structures_explored = 1;
        return finish(realize(model, units, initial_presence(units)));
    }
    Search search{model, units, q.source, q.target, want_one, 0, std::nullopt};
    std::vector<Presence> presence = initial_presence(units);
    search.run(presence);
    answer.structures_explored = search.explored;
    return finish(std::move(search.witness));
}

} // namespace aimc::qual
