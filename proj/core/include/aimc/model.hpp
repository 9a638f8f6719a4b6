// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aimc/interval.hpp"
#include "aimc/rational.hpp"

namespace aimc {

using VertexId = std::size_t;

/// A directed pair of vertices, ordered by (from, to) in vertex-list order.
struct Edge {
    VertexId from = 0;
    VertexId to = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Augmented interval Markov chain: vertices, an interval per transition
/// and a set of edge-equality constraints. An IMC is a model without
/// constraints; a Markov chain is one whose intervals are all singletons.
///
/// Undeclared transitions are the singleton [0,0]. Values are immutable
/// once built.
class AimcModel {
  public:
    class Builder;

    const std::vector<std::string>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const std::string& name(VertexId v) const { return vertices_.at(v); }
    std::optional<VertexId> find(std::string_view name) const;
    /// Throws ModelError for unknown names.
    VertexId index_of(std::string_view name) const;

    /// Declared transitions in (from, to) order.
    const std::map<Edge, Interval>& transitions() const { return transitions_; }
    bool declared(Edge e) const { return transitions_.contains(e); }
    Interval interval(Edge e) const;
    /// Declared edges leaving v, ordered by target.
    const std::vector<Edge>& row(VertexId v) const { return rows_.at(v); }

    /// Each constraint is an unordered pair, stored with the smaller edge first.
    const std::vector<std::pair<Edge, Edge>>& constraints() const { return constraints_; }

    /// All declared intervals are singletons and every constraint ties
    /// equal values.
    bool fully_determined() const;

    std::string edge_name(Edge e) const;

  private:
    AimcModel() = default;

    std::vector<std::string> vertices_;
    std::map<std::string, VertexId, std::less<>> index_;
    std::map<Edge, Interval> transitions_;
    std::vector<std::vector<Edge>> rows_;
    std::vector<std::pair<Edge, Edge>> constraints_;
};

class AimcModel::Builder {
  public:
    /// Adds a vertex (or returns the existing id for a known name).
    VertexId vertex(const std::string& name);
    Builder& transition(const std::string& from, const std::string& to, const Interval& iv);
    Builder& transition(const std::string& from, const std::string& to, const Rational& p) {
        return transition(from, to, Interval::point(p));
    }
    /// Ties two declared transitions; both must be declared by build() time.
    Builder& tie(const std::string& a_from, const std::string& a_to, const std::string& b_from,
                 const std::string& b_to);

    /// Throws ModelError on duplicate transitions, lo > hi, or constraints
    /// naming undeclared edges.
    AimcModel build() const;

  private:
    std::vector<std::string> vertices_;
    std::map<std::string, VertexId, std::less<>> index_;
    std::vector<std::pair<Edge, Interval>> transitions_;
    std::vector<std::pair<Edge, Edge>> ties_;
};

/// A concrete Markov chain: sparse rows of strictly positive rationals that
/// sum to exactly one.
class MarkovChain {
  public:
    using Row = std::vector<std::pair<VertexId, Rational>>;

    /// Zero entries are dropped. Throws ModelError if an entry lies outside
    /// [0,1], a row does not sum to 1, or an index is out of range.
    MarkovChain(std::vector<std::string> vertices, const std::map<Edge, Rational>& delta);

    const std::vector<std::string>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const std::string& name(VertexId v) const { return vertices_.at(v); }
    std::optional<VertexId> find(std::string_view name) const;

    /// Successors of v with their probabilities, ordered by target.
    const Row& row(VertexId v) const { return rows_.at(v); }
    Rational prob(Edge e) const;
    std::map<Edge, Rational> entries() const;

    friend bool operator==(const MarkovChain&, const MarkovChain&) = default;

  private:
    std::vector<std::string> vertices_;
    std::vector<Row> rows_;
};

enum class Relation { Le, Ge };

/// Does p stand in relation rel to threshold?
bool satisfies(const Rational& p, Relation rel, const Rational& threshold);
std::string_view relation_name(Relation rel);

/// Reachability question: is there a refinement with P(source ->> target) ~ threshold?
/// promise_gap is the approximation gap for promise queries.
struct Query {
    VertexId source = 0;
    VertexId target = 0;
    Relation relation = Relation::Ge;
    Rational threshold;
    std::optional<Rational> promise_gap;
};

/// Throws ModelError if the threshold is outside [0,1], the gap is not
/// positive, or a vertex is out of range.
void check_query(const AimcModel& model, const Query& q);

/// A model together with the optional query embedded in the same file.
struct ModelDocument {
    AimcModel model;
    std::optional<Query> query;
};

/// Parses the JSON model format. Throws ParseError for malformed JSON or
/// rationals and ModelError for schema violations (unknown vertices or
/// edges, lo > hi, duplicates).
ModelDocument parse_document(std::string_view text);
AimcModel parse_model(std::string_view text);
/// Deterministic pretty-printed JSON; parse_document inverts it exactly.
std::string serialize(const AimcModel& model, const std::optional<Query>& query = std::nullopt);
std::string serialize(const MarkovChain& chain);

/// Fully determined models convert to the unique chain refining them.
MarkovChain to_markov_chain(const AimcModel& model);

struct Diagnostic {
    std::string code;
    std::string message;
};

/// Empty iff every interval lies inside [0,1], every constraint class has a
/// nonempty intersection, and every row admits values summing to one.
std::vector<Diagnostic> validate(const AimcModel& model);

/// True iff chain is stochastic, takes every transition inside its interval
/// and honors every equality constraint. Throws ModelError if the vertex
/// sets differ.
bool refines(const MarkovChain& chain, const AimcModel& model);

/// One class of edges forced equal by the transitive closure of the
/// constraints, with the intersection of the members' intervals.
struct ConstraintClass {
    std::vector<Edge> members;
    Interval interval;

    bool spans_rows() const;
};

/// Partition of the interval-valued edges (plus any edge named in a
/// constraint) into equality classes, ordered by least member.
class ConstraintClasses {
  public:
    const std::vector<ConstraintClass>& classes() const { return classes_; }
    std::size_t size() const { return classes_.size(); }
    const ConstraintClass& operator[](std::size_t i) const { return classes_[i]; }
    std::optional<std::size_t> class_of(Edge e) const;

    /// The class interval for classified edges, the model interval otherwise.
    Interval effective_interval(const AimcModel& model, Edge e) const;
    /// Edge whose effective interval is not a singleton.
    bool uncertain(const AimcModel& model, Edge e) const;

  private:
    friend ConstraintClasses constraint_classes(const AimcModel&);

    std::vector<ConstraintClass> classes_;
    std::map<Edge, std::size_t> index_;
};

ConstraintClasses constraint_classes(const AimcModel& model);

} // namespace aimc
