// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/lp.hpp"

#include <optional>

#include "aimc/error.hpp"

namespace aimc::lp {

namespace {

// Dense tableau: rows_[i] = coefficients over all columns, rhs_[i] >= 0,
// basis_[i] = basic column of row i.
class Tableau {
  public:
    Tableau(std::size_t rows, std::size_t cols)
        : a_(rows, std::vector<Rational>(cols)), rhs_(rows), basis_(rows, 0), cols_(cols) {}

    std::vector<std::vector<Rational>> a_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::size_t cols_;

    void pivot(std::size_t row, std::size_t col) {
        const Rational inv = a_[row][col].reciprocal();
        for (auto& v : a_[row]) {
            if (!v.is_zero()) {
                v *= inv;
            }
        }
        rhs_[row] *= inv;
        for (std::size_t r = 0; r < a_.size(); ++r) {
            if (r == row || a_[r][col].is_zero()) {
                continue;
            }
            const Rational f = a_[r][col];
            for (std::size_t c = 0; c < cols_; ++c) {
                if (!a_[row][c].is_zero()) {
                    a_[r][c] -= f * a_[row][c];
                }
            }
            rhs_[r] -= f * rhs_[row];
        }
        basis_[row] = col;
    }

    // Maximizes cost . x over the columns flagged in `allowed`. Returns false
    // if unbounded.
    bool optimize(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
        for (;;) {
            // Reduced cost of column c: cost[c] - sum_i cost[basis_i] a_[i][c].
            std::optional<std::size_t> entering;
            for (std::size_t c = 0; c < cols_ && !entering; ++c) {
                if (!allowed[c]) {
                    continue;
                }
                Rational reduced = cost[c];
                for (std::size_t i = 0; i < a_.size(); ++i) {
                    if (!a_[i][c].is_zero() && !cost[basis_[i]].is_zero()) {
                        reduced -= cost[basis_[i]] * a_[i][c];
                    }
                }
                if (reduced.sign() > 0) {
                    entering = c;
                }
            }
            if (!entering) {
                return true;
            }
            std::optional<std::size_t> leaving;
            Rational best;
            for (std::size_t i = 0; i < a_.size(); ++i) {
                if (a_[i][*entering].sign() <= 0) {
                    continue;
                }
                Rational ratio = rhs_[i] / a_[i][*entering];
                if (!leaving || ratio < best || (ratio == best && basis_[i] < basis_[*leaving])) {
                    leaving = i;
                    best = ratio;
                }
            }
            if (!leaving) {
                return false;
            }
            pivot(*leaving, *entering);
        }
    }
};

} // namespace

Solution maximize(const Problem& problem) {
    const std::size_t n = problem.num_vars;
    const std::size_t m = problem.constraints.size();
    if (problem.objective.size() != n) {
        throw PreconditionError("objective size does not match variable count");
    }

    // Columns: structural [0,n), one slack per inequality, one artificial per
    // row that lacks a natural basic column.
    std::size_t slack_count = 0;
    for (const auto& c : problem.constraints) {
        if (c.coeffs.size() != n) {
            throw PreconditionError("constraint size does not match variable count");
        }
        if (c.sense != Sense::Eq) {
            ++slack_count;
        }
    }
    const std::size_t art_base = n + slack_count;
    const std::size_t cols = art_base + m;
    Tableau t(m, cols);
    std::vector<bool> is_artificial(cols, false);

    std::size_t next_slack = n;
    for (std::size_t i = 0; i < m; ++i) {
        const Constraint& c = problem.constraints[i];
        const bool flip = c.rhs.sign() < 0;
        Sense sense = c.sense;
        if (flip) {
            sense = sense == Sense::Le ? Sense::Ge : sense == Sense::Ge ? Sense::Le : Sense::Eq;
        }
        for (std::size_t j = 0; j < n; ++j) {
            t.a_[i][j] = flip ? -c.coeffs[j] : c.coeffs[j];
        }
        t.rhs_[i] = flip ? -c.rhs : c.rhs;
        if (sense == Sense::Le) {
            t.a_[i][next_slack] = Rational(1);
            t.basis_[i] = next_slack++;
        } else {
            if (sense == Sense::Ge) {
                t.a_[i][next_slack++] = Rational(-1);
            }
            t.a_[i][art_base + i] = Rational(1);
            t.basis_[i] = art_base + i;
            is_artificial[art_base + i] = true;
        }
    }

    // Phase 1: maximize -sum(artificials).
    std::vector<Rational> phase1(cols);
    bool any_artificial = false;
    for (std::size_t c = art_base; c < cols; ++c) {
        if (is_artificial[c]) {
            phase1[c] = Rational(-1);
            any_artificial = true;
        }
    }
    std::vector<bool> allowed(cols, true);
    for (std::size_t c = art_base; c < cols; ++c) {
        allowed[c] = is_artificial[c];
    }
    if (any_artificial) {
        t.optimize(phase1, allowed);
        for (std::size_t i = 0; i < m; ++i) {
            if (is_artificial[t.basis_[i]] && !t.rhs_[i].is_zero()) {
                return {Status::Infeasible, Rational(0), {}};
            }
        }
        // Drive zero-level artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_artificial[t.basis_[i]]) {
                continue;
            }
            for (std::size_t c = 0; c < art_base; ++c) {
                if (!t.a_[i][c].is_zero()) {
                    t.pivot(i, c);
                    break;
                }
            }
        }
    }

    // Phase 2 on non-artificial columns; redundant rows keep a zero-level
    // artificial that never re-enters.
    std::vector<Rational> cost(cols);
    for (std::size_t j = 0; j < n; ++j) {
        cost[j] = problem.objective[j];
    }
    for (std::size_t c = art_base; c < cols; ++c) {
        allowed[c] = false;
    }
    if (!t.optimize(cost, allowed)) {
        return {Status::Unbounded, Rational(0), {}};
    }
    Solution sol{Status::Optimal, Rational(0), std::vector<Rational>(n)};
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis_[i] < n) {
            sol.x[t.basis_[i]] = t.rhs_[i];
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        sol.value += problem.objective[j] * sol.x[j];
    }
    return sol;
}

} // namespace aimc::lp
