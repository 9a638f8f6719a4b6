// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "aimc/rational.hpp"

namespace aimc {

/// A subinterval of the rationals with independently open or closed ends.
/// Transition intervals live inside [0,1]; that is checked by validate(),
/// not here.
struct Interval {
    Rational lo;
    bool lo_strict = false;
    Rational hi;
    bool hi_strict = false;

    static Interval point(const Rational& v) { return {v, false, v, false}; }
    static Interval closed(const Rational& lo, const Rational& hi) { return {lo, false, hi, false}; }
    static Interval zero() { return point(Rational(0)); }

    bool contains(const Rational& q) const;
    bool is_empty() const;
    bool is_singleton() const { return lo == hi && !lo_strict && !hi_strict; }
    bool admits_zero() const { return contains(Rational(0)); }
    /// True iff some strictly positive rational lies in the interval.
    bool admits_positive() const;
    /// True iff every member is strictly positive.
    bool excludes_zero() const { return lo.sign() > 0 || (lo.is_zero() && lo_strict); }

    Rational width() const { return hi - lo; }
    Interval intersect(const Interval& other) const;
    /// { 1 - q : q in this }.
    Interval complement() const;

    /// Interval notation, e.g. "[1/3, 2/3)".
    std::string str() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

} // namespace aimc
