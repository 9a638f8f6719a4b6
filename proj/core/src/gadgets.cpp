// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/gadgets.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aimc/error.hpp"

namespace aimc::gadgets {

Cnf parse_dimacs(std::string_view text) {
    Cnf cnf;
    bool header = false;
    std::vector<int> current;
    std::istringstream in{std::string(text)};
    std::string line;
    auto finish_clause = [&] {
        if (current.empty()) {
            throw ParseError("empty clause in DIMACS input");
        }
        if (current.size() > 3) {
            throw ParseError("clause with " + std::to_string(current.size()) + " literals; only 3-CNF is supported");
        }
        while (current.size() < 3) {
            current.push_back(current.back());
        }
        cnf.clauses.push_back({current[0], current[1], current[2]});
        current.clear();
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c") {
            continue;
        }
        if (tok == "%") {
            break;
        }
        if (tok == "p") {
            std::string fmt;
            long vars = -1;
            long clauses = -1;
            if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0) {
                throw ParseError("malformed DIMACS header: " + line);
            }
            cnf.num_vars = static_cast<std::size_t>(vars);
            header = true;
            continue;
        }
        if (!header) {
            throw ParseError("DIMACS clause before the 'p cnf' header");
        }
        do {
            char* end = nullptr;
            const long lit = std::strtol(tok.c_str(), &end, 10);
            if (*end != '\0') {
                throw ParseError("bad DIMACS literal '" + tok + "'");
            }
            if (lit == 0) {
                finish_clause();
                continue;
            }
            if (static_cast<std::size_t>(std::labs(lit)) > cnf.num_vars) {
                throw ParseError("literal " + tok + " exceeds the declared variable count");
            }
            current.push_back(static_cast<int>(lit));
        } while (ls >> tok);
    }
    if (!current.empty()) {
        finish_clause();
    }
    if (!header) {
        throw ParseError("missing DIMACS 'p cnf' header");
    }
    return cnf;
}

Instance encode_3sat(const Cnf& cnf) {
    const std::size_t m = cnf.num_vars;
    const std::size_t k = cnf.clauses.size();
    for (const auto& clause : cnf.clauses) {
        for (int lit : clause) {
            if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > m) {
                throw ModelError("literal " + std::to_string(lit) + " does not name a variable");
            }
        }
    }
    auto pos = [](std::size_t i) { return "x" + std::to_string(i); };
    auto neg = [](std::size_t i) { return "nx" + std::to_string(i); };
    auto lit_name = [&](int lit) { return lit > 0 ? pos(lit) : neg(-lit); };
    auto v = [](std::size_t i) { return "v" + std::to_string(i); };
    auto clause = [](std::size_t i) { return "phi" + std::to_string(i); };

    AimcModel::Builder b;
    for (std::size_t i = 1; i <= m; ++i) {
        b.vertex(pos(i));
    }
    for (std::size_t i = 1; i <= m; ++i) {
        b.vertex(neg(i));
    }
    for (std::size_t i = 1; i <= k; ++i) {
        b.vertex(clause(i));
    }
    b.vertex("S");
    b.vertex("F");
    for (std::size_t i = 0; i <= m; ++i) {
        b.vertex(v(i));
    }

    const Interval any = Interval::closed(0, 1);
    for (std::size_t i = 1; i <= m; ++i) {
        b.transition(v(i - 1), pos(i), any);
        b.transition(v(i - 1), neg(i), any);
        b.transition(pos(i), v(i), any);
        b.transition(pos(i), "F", any);
        b.transition(neg(i), "F", any);
        b.transition(neg(i), v(i), any);
        b.tie(v(i - 1), pos(i), pos(i), v(i));
        b.tie(v(i - 1), pos(i), neg(i), "F");
    }
    for (std::size_t i = 1; i <= k; ++i) {
        std::set<std::string> targets;
        for (int lit : cnf.clauses[i - 1]) {
            targets.insert(lit_name(lit));
        }
        for (const auto& t : targets) {
            b.transition(clause(i), t, any);
        }
    }
    const Rational branch(1, static_cast<long>(k + 1));
    b.transition(v(m), "S", branch);
    for (std::size_t i = 1; i <= k; ++i) {
        b.transition(v(m), clause(i), branch);
    }
    b.transition("S", "S", Rational(1));
    b.transition("F", "F", Rational(1));

    Instance out{b.build(), {}};
    out.query.source = out.model.index_of(v(0));
    out.query.target = out.model.index_of("S");
    out.query.relation = Relation::Ge;
    out.query.threshold = Rational(1);
    return out;
}

Rational sqrtsum_gadget_value(const Rational& alpha, const Rational& beta, const Rational& x) {
    return (alpha * x - beta * x.pow(3) + beta) / Rational(4);
}

namespace {

long ceil_sqrt(long r) {
    long s = 0;
    while (s * s < r) {
        ++s;
    }
    return s;
}

// Exact test of x* = 3 sqrt(r) / (2M) against b via squares (b >= 0).
bool below_xstar(const Rational& b, long r, long M) {
    return b * b < Rational(9 * r) / Rational(4 * M * M);
}

bool above_xstar(const Rational& b, long r, long M) {
    return b * b > Rational(9 * r) / Rational(4 * M * M);
}

} // namespace

SqrtSumInstance encode_sqrtsum(const std::vector<long>& r_list, long k, const SqrtSumOptions& options) {
    if (r_list.empty()) {
        throw PreconditionError("square-root sum instance needs at least one r");
    }
    for (long r : r_list) {
        if (r < 1) {
            throw PreconditionError("every r must be a positive integer");
        }
    }
    if (k < 1) {
        throw PreconditionError("k must be a positive integer");
    }
    SqrtSumParams p;
    p.r_list = r_list;
    p.k = k;
    const long r_max = *std::max_element(r_list.begin(), r_list.end());
    p.M = options.M.value_or(3 * ceil_sqrt(r_max) + 1);
    if (p.M < 1) {
        throw PreconditionError("M must be positive");
    }
    p.N = options.N.value_or(16 * p.M * p.M * p.M);
    if (p.N < 1) {
        throw PreconditionError("N must be positive");
    }
    p.x_interval =
        Interval::closed(options.x_lo.value_or(Rational(1, 2 * p.M)), options.x_hi.value_or(Rational(1, 2)));
    const Rational one(1);
    const Interval& X = p.x_interval;
    if (X.lo.sign() <= 0 || X.hi >= one || X.lo > X.hi) {
        throw PreconditionError("x interval " + X.str() + " must lie strictly inside (0,1)");
    }
    p.alpha = Rational(4 * p.M, p.N);
    if (p.alpha.sign() <= 0 || p.alpha >= one) {
        throw PreconditionError("alpha = 4M/N = " + p.alpha.str() + " is not in (0,1)");
    }
    const long m = static_cast<long>(r_list.size());
    Rational beta_sum;
    for (long r : r_list) {
        const Rational beta = Rational(16 * p.M * p.M * p.M) / Rational(27 * r * p.N);
        if (beta.sign() <= 0 || beta >= one) {
            throw PreconditionError("beta = " + beta.str() + " for r = " + std::to_string(r) + " is not in (0,1)");
        }
        if (!below_xstar(X.lo, r, p.M) || !above_xstar(X.hi, r, p.M)) {
            throw PreconditionError("x* = 3 sqrt(" + std::to_string(r) + ")/(2M) is not strictly inside " + X.str());
        }
        // p_opt = sqrt(r)/N + beta/4 < 1  <=>  r < (N (1 - beta/4))^2
        const Rational room = Rational(p.N) * (one - beta / Rational(4));
        if (room.sign() <= 0 || Rational(r) >= room * room) {
            throw PreconditionError("optimal gadget probability is not below 1 for r = " + std::to_string(r));
        }
        p.beta.push_back(beta);
        beta_sum += beta;
    }
    p.threshold = Rational(k, m * p.N) + beta_sum / Rational(4 * m);

    const Interval Xc = X.complement();
    AimcModel::Builder b;
    b.vertex("v0");
    auto name = [&](const std::string& base, long i) { return m == 1 ? base : base + "_" + std::to_string(i); };
    static const char* const gadget_vertices[] = {"a", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "c4", "d1", "d4", "e"};
    for (long i = 1; i <= m; ++i) {
        for (const char* base : gadget_vertices) {
            b.vertex(name(base, i));
        }
    }
    b.vertex("S");
    b.vertex("F");
    const Rational branch(1, m);
    for (long i = 1; i <= m; ++i) {
        auto n = [&](const char* base) { return name(base, i); };
        const Rational& beta = p.beta[static_cast<std::size_t>(i - 1)];
        b.transition("v0", n("a"), branch);
        for (const char* bi : {"b1", "b2", "b3", "b4"}) {
            b.transition(n("a"), n(bi), Rational(1, 4));
        }
        b.transition(n("b1"), n("c1"), beta).transition(n("b1"), "F", one - beta);
        b.transition(n("b2"), n("c2"), beta).transition(n("b2"), "F", one - beta);
        b.transition(n("b3"), n("c3"), p.alpha).transition(n("b3"), "F", one - p.alpha);
        b.transition(n("b4"), n("c4"), beta).transition(n("b4"), "F", one - beta);

        const std::pair<std::string, std::string> x_edges[] = {
            {n("c1"), "F"}, {n("c2"), "F"}, {n("c3"), "S"}, {n("c4"), "F"},
            {n("d1"), n("e")}, {n("d4"), "S"}, {n("e"), "S"}};
        const std::pair<std::string, std::string> complement_edges[] = {
            {n("c1"), n("d1")}, {n("c2"), "S"}, {n("c3"), "F"}, {n("c4"), n("d4")},
            {n("d1"), "F"}, {n("d4"), "F"}, {n("e"), "F"}};
        for (const auto& [from, to] : x_edges) {
            b.transition(from, to, X);
        }
        for (const auto& [from, to] : complement_edges) {
            b.transition(from, to, Xc);
        }
        for (std::size_t j = 1; j < std::size(x_edges); ++j) {
            b.tie(x_edges[0].first, x_edges[0].second, x_edges[j].first, x_edges[j].second);
        }
    }
    b.transition("S", "S", one);
    b.transition("F", "F", one);

    SqrtSumInstance out{b.build(), {}, std::move(p)};
    out.query.source = out.model.index_of("v0");
    out.query.target = out.model.index_of("S");
    out.query.relation = Relation::Ge;
    out.query.threshold = out.params.threshold;
    return out;
}

Polynomial PolyEncoding::expand() const {
    Polynomial sum;
    for (const PolyTerm& t : terms) {
        Polynomial q = Polynomial::constant(t.alpha);
        for (const Factor& f : t.factors) {
            q *= f.complement ? Polynomial::constant(1) - Polynomial::variable(f.var) : Polynomial::variable(f.var);
        }
        sum += q;
    }
    return Polynomial::constant(offset) + scale * sum;
}

PolyEncoding rewrite_polynomial(const Polynomial& p) {
    PolyEncoding enc;
    std::map<std::vector<Factor>, Rational> weights;
    for (const auto& [mono, coef] : p.terms()) {
        if (mono.empty()) {
            enc.offset += coef;
            continue;
        }
        std::vector<Factor> factors;
        for (const auto& [var, exp] : mono) {
            for (unsigned i = 0; i < exp; ++i) {
                factors.push_back({var, false});
            }
        }
        if (coef.sign() > 0) {
            weights[factors] += coef;
            continue;
        }
        // -c f1 f2 ... fk = c (1-f1) f2...fk + c (1-f2) f3...fk + ... + c (1-fk) - c
        const Rational c = -coef;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            std::vector<Factor> term{{factors[i].var, true}};
            term.insert(term.end(), factors.begin() + static_cast<long>(i) + 1, factors.end());
            std::sort(term.begin(), term.end());
            weights[term] += c;
        }
        enc.offset -= c;
    }
    Rational total;
    for (const auto& [factors, w] : weights) {
        total += w;
    }
    if (total.is_zero()) {
        return enc;
    }
    enc.scale = total;
    for (const auto& [factors, w] : weights) {
        enc.terms.push_back({w / total, factors});
    }
    return enc;
}

PolyProblem parse_poly_problem(std::string_view json_text) {
    using json = nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    auto rational = [](const json& v, const char* what) {
        if (v.is_string()) {
            return Rational::parse(v.get<std::string>());
        }
        if (v.is_number_integer()) {
            return Rational(v.get<long long>());
        }
        throw ParseError(std::string(what) + " must be a rational string \"p/q\"");
    };
    if (!doc.is_object() || !doc.contains("vars") || !doc.at("vars").is_array()) {
        throw ParseError("polynomial file needs a 'vars' array");
    }
    PolyProblem out;
    for (const json& v : doc.at("vars")) {
        if (!v.is_string()) {
            throw ParseError("variable names must be strings");
        }
        out.vars.push_back(v.get<std::string>());
    }
    const std::size_t n = out.vars.size();
    if (doc.contains("monomials")) {
        for (const json& m : doc.at("monomials")) {
            if (!m.is_object() || !m.contains("coef") || !m.contains("exponents") || !m.at("exponents").is_array() ||
                m.at("exponents").size() != n) {
                throw ParseError("each monomial needs 'coef' and one exponent per variable");
            }
            Polynomial::Monomial mono;
            for (std::size_t j = 0; j < n; ++j) {
                const json& e = m.at("exponents")[j];
                if (!e.is_number_integer() || e.get<long long>() < 0) {
                    throw ParseError("exponents must be nonnegative integers");
                }
                if (e.get<long long>() > 0) {
                    mono.push_back({j, static_cast<unsigned>(e.get<long long>())});
                }
            }
            out.poly += Polynomial::monomial(rational(m.at("coef"), "coef"), std::move(mono));
        }
    }
    if (doc.contains("intervals")) {
        const json& ivs = doc.at("intervals");
        if (!ivs.is_array() || ivs.size() != n) {
            throw ParseError("'intervals' needs one entry per variable");
        }
        for (const json& iv : ivs) {
            if (!iv.is_object() || !iv.contains("lo") || !iv.contains("hi")) {
                throw ParseError("intervals need 'lo' and 'hi'");
            }
            out.intervals.push_back({rational(iv.at("lo"), "lo"), iv.value("lo_strict", false),
                                     rational(iv.at("hi"), "hi"), iv.value("hi_strict", false)});
        }
    } else {
        out.intervals.assign(n, Interval::closed(0, 1));
    }
    return out;
}

Instance encode_polynomial(const PolyProblem& problem, const Rational& tau) {
    const std::size_t n = problem.vars.size();
    if (problem.intervals.size() != n) {
        throw PreconditionError("one interval per variable is required");
    }
    if (problem.poly.variable_bound() > n) {
        throw PreconditionError("polynomial references an undeclared variable");
    }
    for (const Interval& iv : problem.intervals) {
        if (iv.is_empty() || iv.lo.sign() < 0 || iv.hi > Rational(1)) {
            throw PreconditionError("variable interval " + iv.str() + " is not a nonempty subset of [0,1]");
        }
    }
    const PolyEncoding enc = rewrite_polynomial(problem.poly);
    const Rational threshold = (tau - enc.offset) / enc.scale;
    if (threshold.sign() < 0) {
        throw PreconditionError("transformed threshold " + threshold.str() +
                                " is below 0: the instance is trivially true");
    }
    if (threshold > Rational(1) || (enc.terms.empty() && threshold.sign() > 0)) {
        throw PreconditionError("transformed threshold " + threshold.str() +
                                " is not attainable: the instance is trivially false");
    }

    AimcModel::Builder b;
    b.vertex("v0");
    auto node = [](std::size_t i, std::size_t j) { return "q" + std::to_string(i + 1) + "_" + std::to_string(j + 1); };
    for (std::size_t i = 0; i < enc.terms.size(); ++i) {
        for (std::size_t j = 0; j < enc.terms[i].factors.size(); ++j) {
            b.vertex(node(i, j));
        }
    }
    b.vertex("S");
    b.vertex("F");

    Rational used;
    // Edges whose probability equals x_var, per variable.
    std::map<std::size_t, std::vector<std::pair<std::string, std::string>>> carries;
    for (std::size_t i = 0; i < enc.terms.size(); ++i) {
        const PolyTerm& t = enc.terms[i];
        b.transition("v0", node(i, 0), t.alpha);
        used += t.alpha;
        for (std::size_t j = 0; j < t.factors.size(); ++j) {
            const Factor& f = t.factors[j];
            const std::string next = j + 1 < t.factors.size() ? node(i, j + 1) : "S";
            const Interval& iv = problem.intervals[f.var];
            b.transition(node(i, j), next, f.complement ? iv.complement() : iv);
            b.transition(node(i, j), "F", f.complement ? iv : iv.complement());
            carries[f.var].push_back(f.complement ? std::pair{node(i, j), std::string("F")}
                                                  : std::pair{node(i, j), next});
        }
    }
    if (used < Rational(1)) {
        b.transition("v0", "F", Rational(1) - used);
    }
    b.transition("S", "S", Rational(1));
    b.transition("F", "F", Rational(1));
    for (const auto& [var, edges] : carries) {
        for (std::size_t j = 1; j < edges.size(); ++j) {
            b.tie(edges[0].first, edges[0].second, edges[j].first, edges[j].second);
        }
    }
    Instance out{b.build(), {}};
    out.query.source = out.model.index_of("v0");
    out.query.target = out.model.index_of("S");
    out.query.relation = Relation::Ge;
    out.query.threshold = threshold;
    return out;
}

} // namespace aimc::gadgets
