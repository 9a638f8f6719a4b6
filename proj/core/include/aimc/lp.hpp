// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "aimc/rational.hpp"

namespace aimc::lp {

enum class Sense { Le, Eq, Ge };

struct Constraint {
    std::vector<Rational> coeffs; // dense, one entry per variable
    Sense sense = Sense::Le;
    Rational rhs;
};

/// maximize objective . x subject to constraints, x >= 0.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<Constraint> constraints;
    std::vector<Rational> objective;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    Rational value;
    std::vector<Rational> x;
};

/// Exact two-phase simplex with Bland's anti-cycling rule.
Solution maximize(const Problem& problem);

} // namespace aimc::lp
