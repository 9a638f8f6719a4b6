// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/oracle.hpp"

#include <thread>

#include "aimc/error.hpp"
#include "aimc/exact.hpp"

namespace aimc::oracle {

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform integer in [0, bound] by rejection.
std::uint64_t uniform(std::uint64_t& state, std::uint64_t bound) {
    if (bound == std::numeric_limits<std::uint64_t>::max()) {
        return splitmix(state);
    }
    const std::uint64_t range = bound + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    for (;;) {
        const std::uint64_t r = splitmix(state);
        if (r < limit) {
            return r % range;
        }
    }
}

struct Best {
    std::optional<Rational> prob;
    std::optional<MarkovChain> chain;
    std::uint64_t evaluations = 0;
};

bool better(const Rational& p, const Rational& incumbent, Relation rel) {
    return rel == Relation::Ge ? p > incumbent : p < incumbent;
}

void offer(Best& best, Rational p, MarkovChain chain, Relation rel) {
    ++best.evaluations;
    if (!best.prob || better(p, *best.prob, rel)) {
        best.prob = std::move(p);
        best.chain = std::move(chain);
    }
}

// Runs f(begin, end, best) over contiguous blocks and merges in block order.
template <class F>
Best run_blocks(std::uint64_t total, unsigned jobs, Relation rel, F f) {
    jobs = std::max(1u, jobs);
    const std::uint64_t block = (total + jobs - 1) / std::max<std::uint64_t>(1, jobs);
    std::vector<Best> parts(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    auto task = [&](unsigned j) {
        try {
            const std::uint64_t begin = std::min(total, j * block);
            const std::uint64_t end = std::min(total, begin + block);
            f(begin, end, parts[j]);
        } catch (...) {
            errors[j] = std::current_exception();
        }
    };
    if (jobs == 1) {
        task(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned j = 0; j < jobs; ++j) {
            threads.emplace_back(task, j);
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    Best merged;
    for (Best& part : parts) {
        merged.evaluations += part.evaluations;
        if (part.prob && (!merged.prob || better(*part.prob, *merged.prob, rel))) {
            merged.prob = std::move(part.prob);
            merged.chain = std::move(part.chain);
        }
    }
    return merged;
}

} // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (index * 0xD1B54A32D192ED03ULL);
    return splitmix(state);
}

std::vector<Rational> equal_division(const Interval& iv, std::uint64_t resolution) {
    if (resolution == 0) {
        throw PreconditionError("grid resolution must be positive");
    }
    if (iv.is_singleton()) {
        return {iv.lo};
    }
    std::vector<Rational> out;
    const Rational step = iv.width() / Rational(static_cast<unsigned long long>(resolution));
    for (std::uint64_t i = 0; i <= resolution; ++i) {
        Rational p = iv.lo + step * Rational(static_cast<unsigned long long>(i));
        if (iv.contains(p)) {
            out.push_back(std::move(p));
        }
    }
    if (out.empty()) {
        out.push_back((iv.lo + iv.hi) / Rational(2));
    }
    return out;
}

Sampler::Sampler(const AimcModel& model, std::uint64_t denominator_cap)
    : model_(model), plan_(approx::plan_grid(model)), cap_(denominator_cap) {
    if (cap_ == 0) {
        throw PreconditionError("denominator cap must be positive");
    }
    const ConstraintClasses classes = constraint_classes(model);
    for (const auto& [c, points] : plan_.class_points) {
        intervals_[c] = classes[c].interval;
    }
}

std::optional<MarkovChain> Sampler::draw(std::uint64_t stream) const {
    constexpr int attempts = 64;
    std::uint64_t state = stream;
    const approx::GridEnumerator grid(model_, plan_);
    for (int a = 0; a < attempts; ++a) {
        std::map<std::size_t, Rational> values;
        bool ok = true;
        for (const auto& [c, iv] : intervals_) {
            const std::uint64_t u = uniform(state, cap_);
            Rational v = iv.lo + iv.width() * Rational(static_cast<unsigned long long>(u)) /
                                     Rational(static_cast<unsigned long long>(cap_));
            if (!iv.contains(v)) {
                ok = false;
                break;
            }
            values[c] = std::move(v);
        }
        if (!ok) {
            continue;
        }
        if (auto chain = grid.chain_for(values)) {
            return chain;
        }
    }
    return std::nullopt;
}

OracleResult brute_force_opt(const AimcModel& model, const Query& q, const Mode& mode, const Options& options) {
    check_query(model, q);
    Best best;
    if (const auto* g = std::get_if<GridMode>(&mode)) {
        approx::GridSpec spec = approx::plan_grid(model);
        const ConstraintClasses classes = constraint_classes(model);
        for (auto& [c, points] : spec.class_points) {
            points = equal_division(classes[c].interval, g->resolution);
        }
        const approx::GridEnumerator grid(model, spec);
        const mpz_class card = grid.cardinality();
        if (card > mpz_class(std::to_string(options.budget))) {
            throw approx::BudgetExceeded(card, options.budget);
        }
        best = run_blocks(card.get_ui(), options.jobs, q.relation,
                          [&](std::uint64_t begin, std::uint64_t end, Best& local) {
                              for (std::uint64_t i = begin; i < end; ++i) {
                                  if (auto chain = grid.chain_at(i)) {
                                      Rational p = exact::reach_prob(*chain, q.source, q.target);
                                      offer(local, std::move(p), std::move(*chain), q.relation);
                                  }
                              }
                          });
    } else {
        const auto& s = std::get<SampleMode>(mode);
        if (s.count > options.budget) {
            throw approx::BudgetExceeded(mpz_class(std::to_string(s.count)), options.budget);
        }
        const Sampler sampler(model, s.denominator_cap);
        best = run_blocks(s.count, options.jobs, q.relation,
                          [&](std::uint64_t begin, std::uint64_t end, Best& local) {
                              for (std::uint64_t i = begin; i < end; ++i) {
                                  if (auto chain = sampler.draw(stream_seed(s.seed, i))) {
                                      Rational p = exact::reach_prob(*chain, q.source, q.target);
                                      offer(local, std::move(p), std::move(*chain), q.relation);
                                  }
                              }
                          });
    }
    if (!best.prob) {
        throw PreconditionError("the oracle found no refinement among its candidates");
    }
    return {std::move(*best.prob), std::move(*best.chain), best.evaluations, mode};
}

} // namespace aimc::oracle
