// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/rational.hpp"

#include <cctype>
#include <ostream>

#include "aimc/error.hpp"

namespace aimc {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

mpz_class parse_integer(std::string_view s) {
    std::string digits(s);
    if (!digits.empty() && digits.front() == '+') {
        digits.erase(0, 1);
    }
    return mpz_class(digits, 10);
}

} // namespace

Rational::Rational(long long v) : value_(mpz_class(std::to_string(v), 10)) {}

Rational::Rational(unsigned long long v) : value_(mpz_class(std::to_string(v), 10)) {}

Rational::Rational(long num, long den) {
    if (den == 0) {
        throw Error("rational with zero denominator");
    }
    value_ = mpq_class(num, 1);
    value_ /= den;
    value_.canonicalize();
}

Rational::Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) {
        throw Error("rational with zero denominator");
    }
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    if (s.find_first_of(".eE") != std::string_view::npos) {
        throw ParseError("decimal literal '" + std::string(text) +
                         "' is not accepted; rationals must be exact, written as p/q");
    }
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        if (!is_integer_literal(s)) {
            throw ParseError("cannot parse rational '" + std::string(text) + "'");
        }
        return Rational(parse_integer(s), mpz_class(1));
    }
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' ||
        den.front() == '+') {
        throw ParseError("cannot parse rational '" + std::string(text) + "'");
    }
    const mpz_class d = parse_integer(den);
    if (d == 0) {
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(parse_integer(num), d);
}

Rational Rational::parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    const auto int_part = s.substr(0, dot);
    const auto frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
        throw ParseError("cannot parse decimal '" + std::string(text) + "'");
    }
    for (char c : int_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("cannot parse decimal '" + std::string(text) + "'");
        }
    }
    for (char c : frac_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("cannot parse decimal '" + std::string(text) + "'");
        }
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    if (digits.empty()) {
        digits = "0";
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    Rational r(mpz_class(digits, 10), den);
    return negative ? -r : r;
}

std::string Rational::str() const { return value_.get_str(10); }

std::string Rational::to_decimal(int digits) const {
    // Rounds half away from zero at the requested number of fractional digits.
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpq_class scaled = abs().value_ * scale;
    mpz_class q = scaled.get_num() / scaled.get_den();
    mpq_class rest = scaled - mpq_class(q);
    if (rest * 2 >= 1) {
        q += 1;
    }
    std::string s = q.get_str(10);
    if (static_cast<int>(s.size()) <= digits) {
        s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    }
    if (digits > 0) {
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    return (sign() < 0 && q != 0 ? "-" : "") + s;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

Rational Rational::pow(unsigned exponent) const {
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), exponent);
    return Rational(num, den);
}

Rational Rational::reciprocal() const {
    if (is_zero()) {
        throw Error("reciprocal of zero");
    }
    return Rational(mpq_class(1 / value_));
}

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw Error("division by zero");
    }
    value_ /= o.value_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace aimc
