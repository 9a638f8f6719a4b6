// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "aimc/error.hpp"

namespace aimc {

// ---------------------------------------------------------------------------
// AimcModel
// ---------------------------------------------------------------------------

std::optional<VertexId> AimcModel::find(std::string_view name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

VertexId AimcModel::index_of(std::string_view name) const {
    if (auto v = find(name)) {
        return *v;
    }
    throw ModelError("unknown vertex '" + std::string(name) + "'");
}

Interval AimcModel::interval(Edge e) const {
    const auto it = transitions_.find(e);
    return it == transitions_.end() ? Interval::zero() : it->second;
}

bool AimcModel::fully_determined() const {
    for (const auto& [e, iv] : transitions_) {
        if (!iv.is_singleton()) {
            return false;
        }
    }
    for (const auto& [a, b] : constraints_) {
        if (interval(a).lo != interval(b).lo) {
            return false;
        }
    }
    return true;
}

std::string AimcModel::edge_name(Edge e) const { return "(" + name(e.from) + "," + name(e.to) + ")"; }

VertexId AimcModel::Builder::vertex(const std::string& name) {
    const auto it = index_.find(name);
    if (it != index_.end()) {
        return it->second;
    }
    const VertexId id = vertices_.size();
    vertices_.push_back(name);
    index_.emplace(name, id);
    return id;
}

AimcModel::Builder& AimcModel::Builder::transition(const std::string& from, const std::string& to,
                                                   const Interval& iv) {
    const Edge e{vertex(from), vertex(to)};
    transitions_.emplace_back(e, iv);
    return *this;
}

AimcModel::Builder& AimcModel::Builder::tie(const std::string& a_from, const std::string& a_to,
                                            const std::string& b_from, const std::string& b_to) {
    ties_.emplace_back(Edge{vertex(a_from), vertex(a_to)}, Edge{vertex(b_from), vertex(b_to)});
    return *this;
}

AimcModel AimcModel::Builder::build() const {
    AimcModel m;
    m.vertices_ = vertices_;
    m.index_ = index_;
    m.rows_.assign(vertices_.size(), {});
    for (const auto& [e, iv] : transitions_) {
        if (iv.lo > iv.hi) {
            throw ModelError("interval with lo > hi on " + m.edge_name(e));
        }
        if (iv.is_empty()) {
            throw ModelError("empty interval " + iv.str() + " on " + m.edge_name(e));
        }
        if (!m.transitions_.emplace(e, iv).second) {
            throw ModelError("duplicate transition " + m.edge_name(e));
        }
        m.rows_[e.from].push_back(e);
    }
    for (auto& row : m.rows_) {
        std::sort(row.begin(), row.end());
    }
    std::set<std::pair<Edge, Edge>> seen;
    for (auto [a, b] : ties_) {
        for (Edge e : {a, b}) {
            if (!m.transitions_.contains(e)) {
                throw ModelError("unknown edge in constraint: " + m.edge_name(e));
            }
        }
        if (b < a) {
            std::swap(a, b);
        }
        if (a == b || !seen.emplace(a, b).second) {
            continue;
        }
        m.constraints_.emplace_back(a, b);
    }
    return m;
}

// ---------------------------------------------------------------------------
// MarkovChain
// ---------------------------------------------------------------------------

MarkovChain::MarkovChain(std::vector<std::string> vertices, const std::map<Edge, Rational>& delta)
    : vertices_(std::move(vertices)), rows_(vertices_.size()) {
    for (const auto& [e, p] : delta) {
        if (e.from >= vertices_.size() || e.to >= vertices_.size()) {
            throw ModelError("chain entry references a vertex out of range");
        }
        if (p.sign() < 0 || p > Rational(1)) {
            throw ModelError("chain entry (" + vertices_[e.from] + "," + vertices_[e.to] + ") = " +
                             p.str() + " outside [0,1]");
        }
        if (!p.is_zero()) {
            rows_[e.from].emplace_back(e.to, p);
        }
    }
    for (VertexId v = 0; v < rows_.size(); ++v) {
        Rational sum;
        for (const auto& [to, p] : rows_[v]) {
            sum += p;
        }
        if (sum != Rational(1)) {
            throw ModelError("row of '" + vertices_[v] + "' sums to " + sum.str() + ", not 1");
        }
    }
}

std::optional<VertexId> MarkovChain::find(std::string_view name) const {
    const auto it = std::find(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end()) {
        return std::nullopt;
    }
    return static_cast<VertexId>(it - vertices_.begin());
}

Rational MarkovChain::prob(Edge e) const {
    const Row& r = rows_.at(e.from);
    const auto it = std::lower_bound(r.begin(), r.end(), e.to,
                                     [](const auto& entry, VertexId to) { return entry.first < to; });
    if (it != r.end() && it->first == e.to) {
        return it->second;
    }
    return Rational(0);
}

std::map<Edge, Rational> MarkovChain::entries() const {
    std::map<Edge, Rational> out;
    for (VertexId v = 0; v < rows_.size(); ++v) {
        for (const auto& [to, p] : rows_[v]) {
            out.emplace(Edge{v, to}, p);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

bool satisfies(const Rational& p, Relation rel, const Rational& threshold) {
    return rel == Relation::Ge ? p >= threshold : p <= threshold;
}

std::string_view relation_name(Relation rel) { return rel == Relation::Ge ? "ge" : "le"; }

void check_query(const AimcModel& model, const Query& q) {
    if (q.source >= model.size() || q.target >= model.size()) {
        throw ModelError("query references a vertex outside the model");
    }
    if (q.threshold.sign() < 0 || q.threshold > Rational(1)) {
        throw ModelError("threshold " + q.threshold.str() + " outside [0,1]");
    }
    if (q.promise_gap && q.promise_gap->sign() <= 0) {
        throw ModelError("promise gap must be positive");
    }
}

MarkovChain to_markov_chain(const AimcModel& model) {
    if (!model.fully_determined()) {
        throw ModelError("model not fully determined");
    }
    std::map<Edge, Rational> delta;
    for (const auto& [e, iv] : model.transitions()) {
        delta.emplace(e, iv.lo);
    }
    return MarkovChain(model.vertices(), delta);
}

// ---------------------------------------------------------------------------
// Constraint classes
// ---------------------------------------------------------------------------

namespace {

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // The smaller index stays root so roots are least members.
    void merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (b < a) {
            std::swap(a, b);
        }
        parent_[b] = a;
    }

  private:
    std::vector<std::size_t> parent_;
};

} // namespace

bool ConstraintClass::spans_rows() const {
    return std::any_of(members.begin(), members.end(),
                       [&](const Edge& e) { return e.from != members.front().from; });
}

std::optional<std::size_t> ConstraintClasses::class_of(Edge e) const {
    const auto it = index_.find(e);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Interval ConstraintClasses::effective_interval(const AimcModel& model, Edge e) const {
    if (auto c = class_of(e)) {
        return classes_[*c].interval;
    }
    return model.interval(e);
}

bool ConstraintClasses::uncertain(const AimcModel& model, Edge e) const {
    return !effective_interval(model, e).is_singleton();
}

ConstraintClasses constraint_classes(const AimcModel& model) {
    std::set<Edge> universe;
    for (const auto& [e, iv] : model.transitions()) {
        if (!iv.is_singleton()) {
            universe.insert(e);
        }
    }
    for (const auto& [a, b] : model.constraints()) {
        universe.insert(a);
        universe.insert(b);
    }
    const std::vector<Edge> edges(universe.begin(), universe.end());
    std::map<Edge, std::size_t> pos;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        pos.emplace(edges[i], i);
    }
    DisjointSets sets(edges.size());
    for (const auto& [a, b] : model.constraints()) {
        sets.merge(pos.at(a), pos.at(b));
    }

    ConstraintClasses out;
    std::map<std::size_t, std::size_t> root_to_class;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::size_t root = sets.find(i);
        auto [it, inserted] = root_to_class.try_emplace(root, out.classes_.size());
        if (inserted) {
            out.classes_.push_back({{}, model.interval(edges[i])});
        }
        ConstraintClass& cls = out.classes_[it->second];
        if (!cls.members.empty()) {
            cls.interval = cls.interval.intersect(model.interval(edges[i]));
        }
        cls.members.push_back(edges[i]);
        out.index_.emplace(edges[i], it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation and refinement
// ---------------------------------------------------------------------------

std::vector<Diagnostic> validate(const AimcModel& model) {
    std::vector<Diagnostic> out;
    for (const auto& [e, iv] : model.transitions()) {
        if (iv.is_empty()) {
            out.push_back({"empty-interval", "empty interval " + iv.str() + " on " + model.edge_name(e)});
        } else if (iv.lo.sign() < 0 || iv.hi > Rational(1)) {
            out.push_back({"interval-range",
                           "interval " + iv.str() + " on " + model.edge_name(e) + " is not within [0,1]"});
        }
    }
    const ConstraintClasses classes = constraint_classes(model);
    for (const ConstraintClass& cls : classes.classes()) {
        if (cls.interval.is_empty()) {
            std::string names;
            for (const Edge& e : cls.members) {
                names += (names.empty() ? "" : " ") + model.edge_name(e);
            }
            out.push_back({"empty-class", "empty constraint class interval for {" + names + "}"});
        }
    }
    for (VertexId v = 0; v < model.size(); ++v) {
        Rational lo_sum;
        Rational hi_sum;
        bool lo_strict = false;
        bool hi_strict = false;
        bool empty = false;
        for (const Edge& e : model.row(v)) {
            const Interval iv = classes.effective_interval(model, e);
            empty = empty || iv.is_empty();
            lo_sum += iv.lo;
            hi_sum += iv.hi;
            lo_strict = lo_strict || iv.lo_strict;
            hi_strict = hi_strict || iv.hi_strict;
        }
        const Interval sums{lo_sum, lo_strict, hi_sum, hi_strict};
        if (empty || !sums.contains(Rational(1))) {
            out.push_back({"row-sum", "row cannot sum to 1 at vertex '" + model.name(v) +
                                          "' (achievable sums " + sums.str() + ")"});
        }
    }
    return out;
}

bool refines(const MarkovChain& chain, const AimcModel& model) {
    if (chain.size() != model.size()) {
        throw ModelError("vertex-set mismatch between chain and model");
    }
    std::vector<VertexId> to_model(chain.size());
    for (VertexId v = 0; v < chain.size(); ++v) {
        const auto m = model.find(chain.name(v));
        if (!m) {
            throw ModelError("vertex-set mismatch: '" + chain.name(v) + "' not in model");
        }
        to_model[v] = *m;
    }
    std::map<Edge, Rational> values;
    for (VertexId v = 0; v < chain.size(); ++v) {
        for (const auto& [to, p] : chain.row(v)) {
            values.emplace(Edge{to_model[v], to_model[to]}, p);
        }
    }
    const auto value = [&](Edge e) {
        const auto it = values.find(e);
        return it == values.end() ? Rational(0) : it->second;
    };
    for (const auto& [e, p] : values) {
        if (!model.interval(e).contains(p)) {
            return false;
        }
    }
    for (const auto& [e, iv] : model.transitions()) {
        if (!iv.contains(value(e))) {
            return false;
        }
    }
    for (const auto& [a, b] : model.constraints()) {
        if (value(a) != value(b)) {
            return false;
        }
    }
    return true;
}

} // namespace aimc
