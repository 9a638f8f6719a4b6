// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "aimc/approx.hpp"
#include "aimc/exact.hpp"
#include "aimc/graph.hpp"

namespace aimc::approx {

BudgetExceeded::BudgetExceeded(mpz_class cardinality, std::uint64_t budget)
    : PreconditionError("grid too large: " + cardinality.get_str() + " grid chains exceed the budget of " +
                        std::to_string(budget)),
      cardinality_(std::move(cardinality)) {}

namespace {

constexpr std::uint64_t chunk_size = 256;

} // namespace

ApproxAnswer approx_decide(const AimcModel& model, const Query& q, const ApproxOptions& options) {
    check_query(model, q);
    if (!q.promise_gap) {
        throw PreconditionError("approximate queries need a promise gap epsilon");
    }
    const graph::StructureStatus status = graph::structure_status(model);
    if (status.kind != graph::StructureKind::EpsilonKnown) {
        throw PreconditionError(std::string("approximate decision needs epsilon-known structure; model structure is ") +
                                graph::kind_name(status.kind));
    }
    GridSpec spec = make_grid(model, *q.promise_gap);
    const GridEnumerator grid(model, spec);
    const mpz_class card = grid.cardinality();
    if (card > mpz_class(std::to_string(options.budget))) {
        throw BudgetExceeded(card, options.budget);
    }
    const std::uint64_t total = card.get_ui();
    const Rational half_gap = *q.promise_gap / Rational(2);
    const Rational bar = q.relation == Relation::Ge ? q.threshold - half_gap : q.threshold + half_gap;

    // Workers claim chunks in increasing order; an accepting index only ever
    // decreases, so every index below the final minimum has been examined.
    constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<std::uint64_t> best{none};
    std::mutex mutex;
    std::optional<MarkovChain> best_chain;
    std::optional<Rational> best_prob;
    std::exception_ptr failure;

    auto worker = [&] {
        try {
            for (;;) {
                const std::uint64_t start = next_chunk.fetch_add(1) * chunk_size;
                if (start >= total || start >= best.load()) {
                    return;
                }
                const std::uint64_t end = std::min(total, start + chunk_size);
                for (std::uint64_t i = start; i < end && i < best.load(); ++i) {
                    auto chain = grid.chain_at(i);
                    if (!chain) {
                        continue;
                    }
                    const Rational p = exact::reach_prob(*chain, q.source, q.target);
                    if (!satisfies(p, q.relation, bar)) {
                        continue;
                    }
                    std::lock_guard lock(mutex);
                    if (i < best.load()) {
                        best.store(i);
                        best_chain = std::move(chain);
                        best_prob = p;
                    }
                    break;
                }
            }
        } catch (...) {
            std::lock_guard lock(mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            best.store(0);
        }
    };

    const unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned j = 0; j < jobs; ++j) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    ApproxAnswer answer;
    answer.grid_cardinality = total;
    answer.spacing = spec.spacing;
    answer.epsilon_struct = *status.epsilon;
    if (best_chain) {
        answer.decision = Decision::Accept;
        answer.witness = std::move(best_chain);
        answer.witness_prob = best_prob;
        answer.grid_chains_visited = best.load() + 1;
    } else {
        answer.decision = Decision::Reject;
        answer.grid_chains_visited = total;
    }
    return answer;
}

} // namespace aimc::approx
