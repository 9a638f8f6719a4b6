// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/interval.hpp"

namespace aimc {

bool Interval::contains(const Rational& q) const {
    const bool above = lo_strict ? lo < q : lo <= q;
    const bool below = hi_strict ? q < hi : q <= hi;
    return above && below;
}

bool Interval::is_empty() const {
    if (lo > hi) {
        return true;
    }
    return lo == hi && (lo_strict || hi_strict);
}

bool Interval::admits_positive() const {
    if (is_empty()) {
        return false;
    }
    return hi.sign() > 0;
}

Interval Interval::intersect(const Interval& other) const {
    Interval r;
    if (lo > other.lo) {
        r.lo = lo;
        r.lo_strict = lo_strict;
    } else if (other.lo > lo) {
        r.lo = other.lo;
        r.lo_strict = other.lo_strict;
    } else {
        r.lo = lo;
        r.lo_strict = lo_strict || other.lo_strict;
    }
    if (hi < other.hi) {
        r.hi = hi;
        r.hi_strict = hi_strict;
    } else if (other.hi < hi) {
        r.hi = other.hi;
        r.hi_strict = other.hi_strict;
    } else {
        r.hi = hi;
        r.hi_strict = hi_strict || other.hi_strict;
    }
    return r;
}

Interval Interval::complement() const {
    return {Rational(1) - hi, hi_strict, Rational(1) - lo, lo_strict};
}

std::string Interval::str() const {
    return std::string(lo_strict ? "(" : "[") + lo.str() + ", " + hi.str() + (hi_strict ? ")" : "]");
}

} // namespace aimc
