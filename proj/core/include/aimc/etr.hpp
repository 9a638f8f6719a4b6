// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aimc/model.hpp"
#include "aimc/polynomial.hpp"

namespace aimc::etr {

/// Affine form over constraint-class indices.
struct LinPoly {
    Rational constant;
    std::map<std::size_t, Rational> coeffs;

    void add(std::size_t cls, const Rational& c);
    bool is_constant() const { return coeffs.empty(); }
    friend bool operator==(const LinPoly&, const LinPoly&) = default;
};

struct UwPartition {
    std::vector<VertexId> u; // sorted
    std::vector<VertexId> w; // sorted
    /// First-passage probability from w into u through W only; zeros omitted.
    std::map<std::pair<VertexId, VertexId>, Rational> alpha;

    bool in_u(VertexId v) const;
};

UwPartition uw_partition(const AimcModel& model, const Query& q);

/// beta(u1,u2) for u1, u2 in U; entries that are identically zero are omitted.
std::map<std::pair<VertexId, VertexId>, LinPoly> beta_polys(const AimcModel& model, const UwPartition& part);

enum class Cmp { Eq, Lt, Le, Gt, Ge };

enum class Part : unsigned { Phi1 = 1, Phi2 = 2, Phi3 = 4 };
constexpr unsigned all_parts = 7;

struct Atom {
    Polynomial lhs;
    Cmp cmp = Cmp::Eq;
    Polynomial rhs;
    Part part = Part::Phi1;
};

/// Existentially closed conjunction of polynomial comparisons.
struct Formula {
    std::vector<std::string> variables;
    std::vector<Atom> atoms;
};

/// A formula plus the meaning of its variables.
struct Encoding {
    Formula formula;
    /// constraint class index -> variable index
    std::map<std::size_t, std::size_t> class_var;
    /// vertex -> variable index
    std::map<VertexId, std::size_t> y_var;
    std::optional<UwPartition> partition;
};

/// Encoding with one y variable per U vertex.
Encoding build_formula_fixed(const AimcModel& model, const Query& q);
/// Encoding with one y variable per vertex.
Encoding build_formula_full(const AimcModel& model, const Query& q);

using Assignment = std::map<std::string, Rational>;

/// Exact truth value of the atoms selected by `parts` (a mask of Part bits).
/// Throws PreconditionError when a variable is unassigned.
bool eval_formula(const Formula& f, const Assignment& assignment, unsigned parts = all_parts);

/// The assignment induced by a refinement: class values and exact reach
/// probabilities for every y variable.
Assignment witness_assignment(const AimcModel& model, const Query& q, const Encoding& enc,
                              const MarkovChain& chain);

/// SMT-LIB 2 script in QF_NRA.
std::string emit_smtlib(const Formula& f);

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveResult {
    SolveStatus status = SolveStatus::Unknown;
    /// Values printed as exact rationals; variables the solver reported in
    /// another form (algebraic numbers) are listed in `inexact`.
    Assignment assignment;
    std::vector<std::string> inexact;
    /// Whether the rational assignment was re-checked and satisfied the formula.
    std::optional<bool> verified;
    std::string diagnostics;
};

/// Runs `command` (with "{file}" replaced by a temporary script path) through
/// /bin/sh. Throws SolverError "solver launch failed" when the command cannot
/// be started; timeouts and unparseable output yield Unknown.
SolveResult solve_external(const Formula& f, const std::string& command,
                           std::chrono::milliseconds timeout = std::chrono::seconds(60));

/// Parses solver output (sat/unsat/unknown followed by an optional model).
SolveResult parse_solver_output(const std::string& output);

} // namespace aimc::etr
