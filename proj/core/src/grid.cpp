// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "aimc/approx.hpp"
#include "aimc/error.hpp"
#include "aimc/graph.hpp"

namespace aimc::approx {

Rational base_spacing(const Rational& eps_struct, const Rational& eps_gap, std::size_t n) {
    if (eps_struct.sign() <= 0 || eps_gap.sign() <= 0 || n == 0) {
        throw PreconditionError("grid spacing needs positive structural bound, gap and vertex count");
    }
    return eps_struct * eps_gap / (Rational(2 * static_cast<long long>(n)) * (Rational(1) + eps_gap));
}

Rational grid_spacing(const Rational& eps_struct, const Rational& eps_gap, std::size_t n, std::size_t k_max) {
    return base_spacing(eps_struct, eps_gap, n) / Rational(static_cast<long long>(std::max<std::size_t>(1, k_max)));
}

Rational robustness_bound(const Rational& eps_struct, const Rational& d, std::size_t n) {
    if (d.sign() < 0 || d >= eps_struct) {
        throw PreconditionError("robustness bound needs 0 <= d < epsilon, got d = " + d.str() +
                                ", epsilon = " + eps_struct.str());
    }
    return (eps_struct / (eps_struct - d)).pow(static_cast<unsigned>(2 * n)) - Rational(1);
}

bool check_magic_inequality(const Rational& x, long r_num, long r_den) {
    if (x < Rational(-1) || r_den <= 0 || r_num < 0 || r_num > r_den) {
        throw PreconditionError("inequality needs x >= -1 and 0 <= r <= 1");
    }
    const Rational r(r_num, r_den);
    const Rational rhs = Rational(1) + r * x;
    if (rhs.sign() < 0) {
        return false;
    }
    // Both sides are nonnegative, so raising to the r_den-th power is monotone.
    return (Rational(1) + x).pow(static_cast<unsigned>(r_num)) <= rhs.pow(static_cast<unsigned>(r_den));
}

std::vector<Rational> grid_points(const Interval& iv, const Rational& spacing) {
    if (spacing.sign() <= 0) {
        throw PreconditionError("grid spacing must be positive");
    }
    if (iv.is_empty()) {
        return {};
    }
    if (iv.is_singleton()) {
        return {iv.lo};
    }
    const Rational half = spacing / Rational(2);
    Rational a = iv.lo_strict ? iv.lo + half : iv.lo;
    Rational b = iv.hi_strict ? iv.hi - half : iv.hi;
    if (a > b || !iv.contains(a) || !iv.contains(b)) {
        return {(iv.lo + iv.hi) / Rational(2)};
    }
    std::vector<Rational> out;
    for (Rational p = a; p < b; p += spacing) {
        out.push_back(p);
    }
    out.push_back(b);
    return out;
}

GridSpec plan_grid(const AimcModel& model) {
    const ConstraintClasses classes = constraint_classes(model);
    GridSpec spec;
    std::vector<bool> slack_class(classes.size(), false);
    for (VertexId v = 0; v < model.size(); ++v) {
        std::optional<Edge> best;
        bool uncertain_row = false;
        for (const Edge& e : model.row(v)) {
            if (!classes.uncertain(model, e)) {
                continue;
            }
            uncertain_row = true;
            const ConstraintClass& cls = classes[*classes.class_of(e)];
            if (cls.members.size() != 1) {
                continue;
            }
            if (!best || cls.interval.width() > classes.effective_interval(model, *best).width()) {
                best = e;
            }
        }
        if (!uncertain_row) {
            continue;
        }
        if (!best) {
            throw PreconditionError("no slack edge in the row of '" + model.name(v) +
                                    "': every uncertain edge there is tied to another edge");
        }
        spec.slack_edge[v] = *best;
        slack_class[*classes.class_of(*best)] = true;
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (!slack_class[c] && !classes[c].interval.is_singleton()) {
            spec.class_points[c] = {};
        }
    }
    for (const auto& [v, slack] : spec.slack_edge) {
        std::size_t gridded = 0;
        for (const Edge& e : model.row(v)) {
            const auto cls = classes.class_of(e);
            if (cls && spec.class_points.contains(*cls)) {
                ++gridded;
            }
        }
        spec.k_max = std::max(spec.k_max, gridded);
    }
    return spec;
}

void fill_grid(const AimcModel& model, GridSpec& spec, const Rational& spacing) {
    const ConstraintClasses classes = constraint_classes(model);
    spec.spacing = spacing;
    for (auto& [c, points] : spec.class_points) {
        points = grid_points(classes[c].interval, spacing);
    }
}

GridSpec make_grid(const AimcModel& model, const Rational& eps_gap) {
    const graph::StructureStatus status = graph::structure_status(model);
    if (status.kind != graph::StructureKind::EpsilonKnown) {
        throw PreconditionError(std::string("grid search needs epsilon-known structure; model structure is ") +
                                graph::kind_name(status.kind));
    }
    GridSpec spec = plan_grid(model);
    fill_grid(model, spec, grid_spacing(*status.epsilon, eps_gap, model.size(), spec.k_max));
    return spec;
}

GridEnumerator::GridEnumerator(const AimcModel& model, GridSpec spec) : model_(model), spec_(std::move(spec)) {
    const ConstraintClasses classes = constraint_classes(model);
    for (const auto& [c, points] : spec_.class_points) {
        order_.push_back(c);
        class_interval_[c] = classes[c].interval;
        for (const Edge& e : classes[c].members) {
            class_edges_.push_back({e, c});
        }
    }
    for (const auto& [e, raw] : model.transitions()) {
        if (!classes.uncertain(model, e)) {
            const Rational v = classes.effective_interval(model, e).lo;
            if (!v.is_zero()) {
                fixed_[e] = v;
            }
        }
    }
}

mpz_class GridEnumerator::cardinality() const {
    mpz_class total = 1;
    for (std::size_t c : order_) {
        total *= static_cast<unsigned long>(spec_.class_points.at(c).size());
    }
    return total;
}

std::optional<MarkovChain> GridEnumerator::chain_for(const std::map<std::size_t, Rational>& values) const {
    std::map<Edge, Rational> delta = fixed_;
    for (const auto& [e, c] : class_edges_) {
        delta[e] = values.at(c);
    }
    for (const auto& [v, slack] : spec_.slack_edge) {
        Rational residual(1);
        for (const Edge& e : model_.row(v)) {
            if (e == slack) {
                continue;
            }
            auto it = delta.find(e);
            if (it != delta.end()) {
                residual -= it->second;
            }
        }
        if (!model_.interval(slack).contains(residual)) {
            return std::nullopt;
        }
        delta[slack] = residual;
    }
    return MarkovChain(model_.vertices(), delta);
}

std::optional<MarkovChain> GridEnumerator::chain_at(std::uint64_t index) const {
    std::map<std::size_t, Rational> values;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
        const auto& points = spec_.class_points.at(*it);
        values[*it] = points[index % points.size()];
        index /= points.size();
    }
    return chain_for(values);
}

std::vector<MarkovChain> grid_refinements(const AimcModel& model, const GridSpec& spec) {
    if (graph::structure_status(model).kind != graph::StructureKind::EpsilonKnown) {
        throw PreconditionError("grid refinements need epsilon-known structure");
    }
    GridEnumerator grid(model, spec);
    const mpz_class card = grid.cardinality();
    if (!card.fits_ulong_p()) {
        throw PreconditionError("grid too large to enumerate: " + card.get_str() + " grid chains");
    }
    std::vector<MarkovChain> out;
    for (std::uint64_t i = 0; i < card.get_ui(); ++i) {
        if (auto chain = grid.chain_at(i)) {
            out.push_back(std::move(*chain));
        }
    }
    return out;
}

std::optional<MarkovChain> nearest_grid_chain(const AimcModel& model, const GridSpec& spec,
                                              const MarkovChain& chain) {
    const ConstraintClasses classes = constraint_classes(model);
    std::map<std::size_t, Rational> values;
    for (const auto& [c, points] : spec.class_points) {
        const Rational v = chain.prob(classes[c].members.front());
        auto it = std::lower_bound(points.begin(), points.end(), v);
        Rational pick;
        if (it == points.end()) {
            pick = points.back();
        } else if (it == points.begin()) {
            pick = *it;
        } else {
            const Rational& hi = *it;
            const Rational& lo = *(it - 1);
            pick = (hi - v) < (v - lo) ? hi : lo;
        }
        values[c] = pick;
    }
    return GridEnumerator(model, spec).chain_for(values);
}

} // namespace aimc::approx
