// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace aimc::testing {

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

long Rng::range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

Rational Rng::rational(const Rational& lo, const Rational& hi, long den) {
    // Integer multiples of 1/den inside [lo, hi], falling back to lo.
    mpz_class first = (lo * Rational(den)).numerator();
    const mpz_class lo_den = (lo * Rational(den)).denominator();
    if (lo_den != 1) {
        mpz_fdiv_q(first.get_mpz_t(), first.get_mpz_t(), lo_den.get_mpz_t());
        first += 1;
    }
    const Rational hd = hi * Rational(den);
    mpz_class last = hd.numerator();
    mpz_fdiv_q(last.get_mpz_t(), last.get_mpz_t(), hd.denominator().get_mpz_t());
    if (last < first) {
        return lo;
    }
    const mpz_class span = last - first + 1;
    const mpz_class pick = first + mpz_class(static_cast<unsigned long>(below(span.get_ui())));
    return Rational(pick, mpz_class(den));
}

std::vector<Rational> Rng::split_unit(std::size_t parts, long den) {
    if (parts == 0 || static_cast<long>(parts) > den) {
        throw std::invalid_argument("split_unit: bad arguments");
    }
    std::set<long> cuts;
    while (cuts.size() + 1 < parts) {
        cuts.insert(range(1, den - 1));
    }
    std::vector<Rational> out;
    long prev = 0;
    for (long c : cuts) {
        out.emplace_back(c - prev, den);
        prev = c;
    }
    out.emplace_back(den - prev, den);
    return out;
}

std::vector<std::string> vertex_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
    }
    return names;
}

namespace {

std::vector<VertexId> distinct_targets(Rng& rng, std::size_t n, std::size_t k, VertexId from_at_least) {
    std::set<VertexId> picked;
    const std::size_t pool = n - from_at_least;
    k = std::min(k, pool);
    while (picked.size() < k) {
        picked.insert(from_at_least + rng.below(pool));
    }
    return {picked.begin(), picked.end()};
}

} // namespace

MarkovChain random_chain(Rng& rng, std::size_t n, std::size_t max_support, std::size_t sinks) {
    std::map<Edge, Rational> delta;
    for (VertexId v = 0; v < n; ++v) {
        if (v + sinks >= n) {
            delta[{v, v}] = Rational(1);
            continue;
        }
        const auto targets = distinct_targets(rng, n, 1 + rng.below(max_support), 0);
        const auto probs = rng.split_unit(targets.size(), 12);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            delta[{v, targets[i]}] = probs[i];
        }
    }
    return MarkovChain(vertex_names(n), delta);
}

MarkovChain random_acyclic_chain(Rng& rng, std::size_t n) {
    std::map<Edge, Rational> delta;
    for (VertexId v = 0; v < n; ++v) {
        if (v + 2 >= n) {
            delta[{v, v}] = Rational(1);
            continue;
        }
        const auto targets = distinct_targets(rng, n, 1 + rng.below(3), v + 1);
        const auto probs = rng.split_unit(targets.size(), 10);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            delta[{v, targets[i]}] = probs[i];
        }
    }
    return MarkovChain(vertex_names(n), delta);
}

Rational path_sum(const MarkovChain& chain, VertexId s, VertexId t) {
    if (s == t) {
        return Rational(1);
    }
    Rational total;
    for (const auto& [to, p] : chain.row(s)) {
        if (to == s) {
            continue;
        }
        total += p * path_sum(chain, to, t);
    }
    return total;
}

bool bscc_prob_one(const MarkovChain& chain, VertexId s, VertexId t) {
    const std::size_t n = chain.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (VertexId v = 0; v < n; ++v) {
        reach[v][v] = true;
        if (v == t) {
            continue;
        }
        for (const auto& [to, p] : chain.row(v)) {
            reach[v][to] = true;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) {
                    reach[i][j] = true;
                }
            }
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (!reach[s][v] || v == t) {
            continue;
        }
        bool bottom = true;
        for (VertexId u = 0; u < n; ++u) {
            if (reach[v][u] && !reach[u][v]) {
                bottom = false;
                break;
            }
        }
        if (bottom) {
            return false;
        }
    }
    return true;
}

bool truth_table_sat(const gadgets::Cnf& cnf) {
    const std::size_t m = cnf.num_vars;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
        bool all = true;
        for (const auto& clause : cnf.clauses) {
            bool any = false;
            for (int lit : clause) {
                const bool value = (bits >> (std::abs(lit) - 1)) & 1;
                if ((lit > 0) == value) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                all = false;
                break;
            }
        }
        if (all) {
            return true;
        }
    }
    return false;
}

MarkovChain instantiate(const AimcModel& model, const std::function<Rational(Edge, const Interval&)>& value) {
    std::map<Edge, Rational> delta;
    for (const auto& [e, iv] : model.transitions()) {
        delta[e] = value(e, iv);
    }
    return MarkovChain(model.vertices(), delta);
}

RandomModel random_eps_known_model(Rng& rng, std::size_t n, std::size_t uncertain_rows, const Rational& width_cap) {
    const Rational eighth(1, 8);
    const auto names = vertex_names(n);
    AimcModel::Builder b;
    for (const auto& name : names) {
        b.vertex(name);
    }
    const VertexId t = n - 1;
    const VertexId fail = n - 2;
    b.transition(names[t], names[t], Rational(1));
    b.transition(names[fail], names[fail], Rational(1));

    std::vector<VertexId> inner(n - 2);
    std::iota(inner.begin(), inner.end(), 0);
    std::set<VertexId> uncertain;
    while (uncertain.size() < std::min(uncertain_rows, inner.size())) {
        uncertain.insert(inner[rng.below(inner.size())]);
    }
    for (VertexId v : inner) {
        if (uncertain.contains(v)) {
            const auto targets = distinct_targets(rng, n, 3, 0);
            // Optional fixed edge on the third target, then a gridded pair.
            const Rational fixed = targets.size() == 3 && rng.coin() ? Rational(rng.range(1, 2), 8) : Rational(0);
            const Rational mass = Rational(1) - fixed;
            const Rational room = mass - Rational(1, 4);
            const Rational lo = eighth + rng.rational(Rational(0), room / Rational(2), 48);
            const Rational top = min(lo + width_cap, mass - eighth);
            Rational hi = rng.rational(lo, top, 48);
            if (hi == lo) {
                hi = top;
            }
            b.transition(names[v], names[targets[0]], Interval::closed(lo, hi));
            b.transition(names[v], names[targets[1]], Interval::closed(mass - hi, mass - lo));
            if (!fixed.is_zero()) {
                b.transition(names[v], names[targets[2]], fixed);
            }
            continue;
        }
        const auto targets = distinct_targets(rng, n, 1 + rng.below(3), 0);
        const auto weights = rng.split_unit(targets.size(), 12);
        const Rational spare = Rational(1) - Rational(static_cast<long>(targets.size()), 8);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            b.transition(names[v], names[targets[i]], eighth + weights[i] * spare);
        }
    }
    Query q;
    q.source = 0;
    q.target = t;
    return {b.build(), q};
}

RandomModel random_aimc(Rng& rng, std::size_t n) {
    const auto names = vertex_names(n);
    AimcModel::Builder b;
    for (const auto& name : names) {
        b.vertex(name);
    }
    std::vector<std::pair<std::pair<std::string, std::string>, Interval>> tie_pool;
    for (VertexId v = 0; v < n; ++v) {
        const auto kind = rng.below(4);
        if (kind == 0 || v + 1 == n) {
            b.transition(names[v], names[v], Rational(1));
            continue;
        }
        const auto targets = distinct_targets(rng, n, 2 + rng.below(2), 0);
        const auto base = rng.split_unit(targets.size(), 12);
        if (kind == 1) {
            for (std::size_t i = 0; i < targets.size(); ++i) {
                b.transition(names[v], names[targets[i]], base[i]);
            }
            continue;
        }
        // Uncertain row: the last target is the single-member slack edge.
        for (std::size_t i = 0; i + 1 < targets.size(); ++i) {
            const auto& from = names[v];
            const auto& to = names[targets[i]];
            if (!tie_pool.empty() && rng.below(3) == 0) {
                const auto& [other, iv] = tie_pool[rng.below(tie_pool.size())];
                b.transition(from, to, iv);
                b.tie(from, to, other.first, other.second);
                continue;
            }
            Interval iv;
            iv.lo = rng.below(4) == 0 ? Rational(0) : max(Rational(0), base[i] - Rational(1, 24));
            iv.hi = base[i] + Rational(1, 24);
            iv.lo_strict = iv.lo.is_zero() ? rng.below(3) == 0 : rng.coin();
            iv.hi_strict = rng.coin();
            b.transition(from, to, iv);
            tie_pool.push_back({{from, to}, iv});
        }
        Interval slack = Interval::closed(Rational(0), Rational(1));
        slack.lo_strict = rng.coin();
        b.transition(names[v], names[targets.back()], slack);
    }
    Query q;
    q.source = 0;
    q.target = n - 1;
    q.relation = rng.coin() ? Relation::Ge : Relation::Le;
    q.threshold = rng.rational(Rational(0), Rational(1), 8);
    return {b.build(), q};
}

Polynomial random_polynomial(Rng& rng, std::size_t vars, unsigned degree, long coef_bound) {
    Polynomial p;
    const auto terms = 1 + rng.below(5);
    for (std::uint64_t i = 0; i < terms; ++i) {
        Polynomial::Monomial m;
        unsigned left = static_cast<unsigned>(rng.below(degree + 1));
        while (left > 0) {
            const unsigned e = 1 + static_cast<unsigned>(rng.below(left));
            m.emplace_back(rng.below(vars), e);
            left -= e;
        }
        long c = 0;
        while (c == 0) {
            c = rng.range(-coef_bound, coef_bound);
        }
        p += Polynomial::monomial(Rational(c, rng.range(1, 3)), m);
    }
    return p;
}

} // namespace aimc::testing
