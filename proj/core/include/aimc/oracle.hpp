// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "aimc/approx.hpp"
#include "aimc/model.hpp"

namespace aimc::oracle {

/// Every non-slack class takes the points lo + i (hi - lo) / resolution.
struct GridMode {
    std::uint64_t resolution = 16;
};

/// Uniform draws with bounded denominators, one PRNG stream per sample.
struct SampleMode {
    std::uint64_t count = 1000;
    std::uint64_t seed = 0xA1C0;
    std::uint64_t denominator_cap = 1u << 16;
};

using Mode = std::variant<GridMode, SampleMode>;

struct Options {
    std::uint64_t budget = 10'000'000;
    unsigned jobs = 1;
};

struct OracleResult {
    Rational best_prob;
    MarkovChain best_chain;
    std::uint64_t evaluations = 0;
    Mode mode;
};

/// Equal-division grid over a class interval; strict endpoints are dropped,
/// and the midpoint is used when nothing else remains.
std::vector<Rational> equal_division(const Interval& iv, std::uint64_t resolution);

/// Random refinements drawn class by class, with slack edges completing rows.
class Sampler {
  public:
    Sampler(const AimcModel& model, std::uint64_t denominator_cap);

    /// Draw for one sample stream; retries a bounded number of times when a
    /// residual falls outside its interval.
    std::optional<MarkovChain> draw(std::uint64_t stream_seed) const;

  private:
    const AimcModel& model_;
    approx::GridSpec plan_;
    std::map<std::size_t, Interval> intervals_;
    std::uint64_t cap_;
};

/// Per-sample stream seed derived from the run seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Maximizes (Ge) or minimizes (Le) the exact reach probability over the
/// enumerated or sampled refinements. Ties go to the earliest candidate.
OracleResult brute_force_opt(const AimcModel& model, const Query& q, const Mode& mode, const Options& options = {});

} // namespace aimc::oracle
