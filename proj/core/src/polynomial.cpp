// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/polynomial.hpp"

#include <algorithm>

#include "aimc/error.hpp"

namespace aimc {

namespace {

Polynomial::Monomial multiply(const Polynomial::Monomial& a, const Polynomial::Monomial& b) {
    Polynomial::Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

Polynomial Polynomial::constant(const Rational& c) {
    Polynomial p;
    p.add_term({}, c);
    return p;
}

Polynomial Polynomial::variable(std::size_t var) {
    Polynomial p;
    p.add_term({{var, 1U}}, Rational(1));
    return p;
}

Polynomial Polynomial::monomial(const Rational& coef, Monomial m) {
    std::sort(m.begin(), m.end());
    Monomial merged;
    for (const auto& [var, exp] : m) {
        if (exp == 0) {
            continue;
        }
        if (!merged.empty() && merged.back().first == var) {
            merged.back().second += exp;
        } else {
            merged.emplace_back(var, exp);
        }
    }
    Polynomial p;
    p.add_term(merged, coef);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_term() const {
    const auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Polynomial::degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
        unsigned md = 0;
        for (const auto& [var, exp] : m) {
            md += exp;
        }
        d = std::max(d, md);
    }
    return d;
}

std::size_t Polynomial::variable_bound() const {
    std::size_t bound = 0;
    for (const auto& [m, c] : terms_) {
        for (const auto& [var, exp] : m) {
            bound = std::max(bound, var + 1);
        }
    }
    return bound;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
    Rational total;
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (const auto& [var, exp] : m) {
            if (var >= point.size()) {
                throw Error("polynomial evaluated at a point missing variable " + std::to_string(var));
            }
            term *= point[var].pow(exp);
        }
        total += term;
    }
    return total;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) {
        add_term(m, -c);
    }
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    Polynomial product;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            product.add_term(multiply(ma, mb), ca * cb);
        }
    }
    *this = std::move(product);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coef] : terms_) {
        coef *= c;
    }
    return *this;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) {
            out += c.sign() < 0 ? " - " : " + ";
        } else if (c.sign() < 0) {
            out += "-";
        }
        const Rational mag = c.abs();
        std::string factors;
        for (const auto& [var, exp] : m) {
            if (!factors.empty()) {
                factors += "*";
            }
            factors += var < names.size() ? names[var] : "v" + std::to_string(var);
            if (exp > 1) {
                factors += "^" + std::to_string(exp);
            }
        }
        if (factors.empty()) {
            out += mag.str();
        } else if (mag == Rational(1)) {
            out += factors;
        } else {
            out += mag.str() + "*" + factors;
        }
    }
    return out;
}

} // namespace aimc
