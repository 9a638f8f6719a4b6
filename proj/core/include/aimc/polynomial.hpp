// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aimc/rational.hpp"

namespace aimc {

/// Multivariate polynomial with rational coefficients over variables
/// identified by index. Zero coefficients are never stored.
class Polynomial {
  public:
    /// Sorted by variable index; every exponent is positive.
    using Monomial = std::vector<std::pair<std::size_t, unsigned>>;

    Polynomial() = default;
    static Polynomial constant(const Rational& c);
    static Polynomial variable(std::size_t var);
    static Polynomial monomial(const Rational& coef, Monomial m);

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    unsigned degree() const;
    /// One past the largest variable index referenced (0 if constant).
    std::size_t variable_bound() const;

    Rational evaluate(std::span<const Rational> point) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

    /// Human-readable rendering using the given variable names.
    std::string str(const std::vector<std::string>& names) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    void add_term(const Monomial& m, const Rational& c);

    std::map<Monomial, Rational> terms_;
};

} // namespace aimc
