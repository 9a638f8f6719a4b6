// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/etr.hpp"

#include <algorithm>

#include "aimc/error.hpp"
#include "aimc/exact.hpp"
#include "aimc/graph.hpp"

namespace aimc::etr {

void LinPoly::add(std::size_t cls, const Rational& c) {
    Rational& slot = coeffs[cls];
    slot += c;
    if (slot.is_zero()) {
        coeffs.erase(cls);
    }
}

bool UwPartition::in_u(VertexId v) const { return std::binary_search(u.begin(), u.end(), v); }

namespace {

bool row_uncertain(const AimcModel& model, const ConstraintClasses& classes, VertexId v) {
    const auto& row = model.row(v);
    return std::any_of(row.begin(), row.end(), [&](const Edge& e) { return classes.uncertain(model, e); });
}

// Fixed entry value for a certain edge.
Rational fixed_value(const AimcModel& model, const ConstraintClasses& classes, Edge e) {
    return classes.effective_interval(model, e).lo;
}

Polynomial linpoly_to_poly(const LinPoly& lp, const std::map<std::size_t, std::size_t>& class_var) {
    Polynomial p = Polynomial::constant(lp.constant);
    for (const auto& [cls, c] : lp.coeffs) {
        p += c * Polynomial::variable(class_var.at(cls));
    }
    return p;
}

Polynomial constant(const Rational& c) { return Polynomial::constant(c); }

// Shared φ1: row sums of uncertain rows and class interval bounds; fixed
// rows that cannot sum to one make the formula false.
void add_phi1(const AimcModel& model, const ConstraintClasses& classes, Encoding& enc) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const ConstraintClass& cls = classes[c];
        if (cls.interval.is_singleton()) {
            continue;
        }
        const std::size_t var = enc.formula.variables.size();
        enc.formula.variables.push_back("x" + std::to_string(c));
        enc.class_var[c] = var;
    }
    for (const auto& [c, var] : enc.class_var) {
        const Interval& iv = classes[c].interval;
        const Polynomial x = Polynomial::variable(var);
        enc.formula.atoms.push_back({constant(iv.lo), iv.lo_strict ? Cmp::Lt : Cmp::Le, x, Part::Phi1});
        enc.formula.atoms.push_back({x, iv.hi_strict ? Cmp::Lt : Cmp::Le, constant(iv.hi), Part::Phi1});
    }
    for (VertexId v = 0; v < model.size(); ++v) {
        Polynomial sum;
        for (const Edge& e : model.row(v)) {
            if (classes.uncertain(model, e)) {
                sum += Polynomial::variable(enc.class_var.at(*classes.class_of(e)));
            } else {
                sum += constant(fixed_value(model, classes, e));
            }
        }
        if (!sum.is_constant() || sum.constant_term() != Rational(1)) {
            enc.formula.atoms.push_back({sum, Cmp::Eq, constant(Rational(1)), Part::Phi1});
        }
    }
}

// Range conjuncts for y and the zero pin for vertices that cannot reach t
// in any refinement.
void add_y_bounds(const AimcModel& model, const Query& q, Encoding& enc) {
    const auto reaches = graph::can_reach(graph::union_graph(model), q.target);
    for (const auto& [v, var] : enc.y_var) {
        const Polynomial y = Polynomial::variable(var);
        enc.formula.atoms.push_back({constant(Rational(0)), Cmp::Le, y, Part::Phi2});
        enc.formula.atoms.push_back({y, Cmp::Le, constant(Rational(1)), Part::Phi2});
        if (!reaches[v]) {
            enc.formula.atoms.push_back({y, Cmp::Eq, constant(Rational(0)), Part::Phi2});
        }
    }
}

void add_phi3(const Query& q, Encoding& enc) {
    const Polynomial ys = Polynomial::variable(enc.y_var.at(q.source));
    enc.formula.atoms.push_back(
        {ys, q.relation == Relation::Ge ? Cmp::Ge : Cmp::Le, constant(q.threshold), Part::Phi3});
}

void add_y(Encoding& enc, VertexId v) {
    const std::size_t var = enc.formula.variables.size();
    enc.formula.variables.push_back("y" + std::to_string(v));
    enc.y_var[v] = var;
}

} // namespace

UwPartition uw_partition(const AimcModel& model, const Query& q) {
    check_query(model, q);
    const ConstraintClasses classes = constraint_classes(model);
    UwPartition part;
    for (VertexId v = 0; v < model.size(); ++v) {
        if (v == q.source || v == q.target || row_uncertain(model, classes, v)) {
            part.u.push_back(v);
        } else {
            part.w.push_back(v);
        }
    }
    if (part.w.empty()) {
        return part;
    }
    // W rows keep their fixed entries; U vertices become absorbing, so reaching
    // u in this chain means entering U first at u.
    std::vector<MarkovChain::Row> rows(model.size());
    for (VertexId v : part.w) {
        for (const Edge& e : model.row(v)) {
            const Rational p = fixed_value(model, classes, e);
            if (!p.is_zero()) {
                rows[v].push_back({e.to, p});
            }
        }
    }
    for (VertexId u : part.u) {
        rows[u].push_back({u, Rational(1)});
    }
    for (VertexId u : part.u) {
        const auto reach = exact::reach_prob_rows(rows, u);
        for (VertexId w : part.w) {
            if (!reach[w].is_zero()) {
                part.alpha[{w, u}] = reach[w];
            }
        }
    }
    return part;
}

std::map<std::pair<VertexId, VertexId>, LinPoly> beta_polys(const AimcModel& model, const UwPartition& part) {
    const ConstraintClasses classes = constraint_classes(model);
    std::map<std::pair<VertexId, VertexId>, LinPoly> out;
    // Contribution of an edge value (variable or constant) times a weight.
    auto add_edge = [&](LinPoly& target, Edge e, const Rational& weight) {
        if (classes.uncertain(model, e)) {
            target.add(*classes.class_of(e), weight);
        } else {
            target.constant += fixed_value(model, classes, e) * weight;
        }
    };
    for (VertexId u1 : part.u) {
        std::map<VertexId, LinPoly> row;
        for (const Edge& e : model.row(u1)) {
            if (part.in_u(e.to)) {
                add_edge(row[e.to], e, Rational(1));
                continue;
            }
            for (VertexId u2 : part.u) {
                auto it = part.alpha.find({e.to, u2});
                if (it != part.alpha.end()) {
                    add_edge(row[u2], e, it->second);
                }
            }
        }
        for (auto& [u2, poly] : row) {
            if (!poly.constant.is_zero() || !poly.coeffs.empty()) {
                out[{u1, u2}] = std::move(poly);
            }
        }
    }
    return out;
}

Encoding build_formula_fixed(const AimcModel& model, const Query& q) {
    check_query(model, q);
    const ConstraintClasses classes = constraint_classes(model);
    Encoding enc;
    add_phi1(model, classes, enc);
    UwPartition part = uw_partition(model, q);
    for (VertexId u : part.u) {
        add_y(enc, u);
    }
    const auto beta = beta_polys(model, part);
    for (VertexId u : part.u) {
        const Polynomial y = Polynomial::variable(enc.y_var.at(u));
        if (u == q.target) {
            enc.formula.atoms.push_back({y, Cmp::Eq, constant(Rational(1)), Part::Phi2});
            continue;
        }
        Polynomial rhs;
        for (VertexId u2 : part.u) {
            auto it = beta.find({u, u2});
            if (it != beta.end()) {
                rhs += linpoly_to_poly(it->second, enc.class_var) * Polynomial::variable(enc.y_var.at(u2));
            }
        }
        enc.formula.atoms.push_back({y, Cmp::Eq, rhs, Part::Phi2});
    }
    add_y_bounds(model, q, enc);
    add_phi3(q, enc);
    enc.partition = std::move(part);
    return enc;
}

Encoding build_formula_full(const AimcModel& model, const Query& q) {
    check_query(model, q);
    const ConstraintClasses classes = constraint_classes(model);
    Encoding enc;
    add_phi1(model, classes, enc);
    for (VertexId v = 0; v < model.size(); ++v) {
        add_y(enc, v);
    }
    for (VertexId v = 0; v < model.size(); ++v) {
        const Polynomial y = Polynomial::variable(enc.y_var.at(v));
        if (v == q.target) {
            enc.formula.atoms.push_back({y, Cmp::Eq, constant(Rational(1)), Part::Phi2});
            continue;
        }
        Polynomial rhs;
        for (const Edge& e : model.row(v)) {
            const Polynomial target = Polynomial::variable(enc.y_var.at(e.to));
            if (classes.uncertain(model, e)) {
                rhs += Polynomial::variable(enc.class_var.at(*classes.class_of(e))) * target;
            } else {
                rhs += fixed_value(model, classes, e) * target;
            }
        }
        enc.formula.atoms.push_back({y, Cmp::Eq, rhs, Part::Phi2});
    }
    add_y_bounds(model, q, enc);
    add_phi3(q, enc);
    return enc;
}

bool eval_formula(const Formula& f, const Assignment& assignment, unsigned parts) {
    std::vector<Rational> point;
    point.reserve(f.variables.size());
    for (const std::string& name : f.variables) {
        auto it = assignment.find(name);
        if (it == assignment.end()) {
            throw PreconditionError("no value for variable '" + name + "'");
        }
        point.push_back(it->second);
    }
    for (const Atom& atom : f.atoms) {
        if ((parts & static_cast<unsigned>(atom.part)) == 0) {
            continue;
        }
        const Rational l = atom.lhs.evaluate(point);
        const Rational r = atom.rhs.evaluate(point);
        bool ok = false;
        switch (atom.cmp) {
        case Cmp::Eq:
            ok = l == r;
            break;
        case Cmp::Lt:
            ok = l < r;
            break;
        case Cmp::Le:
            ok = l <= r;
            break;
        case Cmp::Gt:
            ok = l > r;
            break;
        case Cmp::Ge:
            ok = l >= r;
            break;
        }
        if (!ok) {
            return false;
        }
    }
    return true;
}

Assignment witness_assignment(const AimcModel& model, const Query& q, const Encoding& enc,
                              const MarkovChain& chain) {
    const ConstraintClasses classes = constraint_classes(model);
    Assignment out;
    for (const auto& [c, var] : enc.class_var) {
        out[enc.formula.variables[var]] = chain.prob(classes[c].members.front());
    }
    const auto reach = exact::reach_prob_all(chain, q.target);
    for (const auto& [v, var] : enc.y_var) {
        out[enc.formula.variables[var]] = reach[v];
    }
    return out;
}

} // namespace aimc::etr
