// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <vector>

#include "aimc/exact.hpp"
#include "aimc/model.hpp"

namespace {

// Gambler's ruin on n states with absorbing ends.
aimc::MarkovChain ruin_chain(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
    }
    std::map<aimc::Edge, aimc::Rational> delta;
    delta[{0, 0}] = aimc::Rational(1);
    delta[{n - 1, n - 1}] = aimc::Rational(1);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        delta[{i, i + 1}] = aimc::Rational(2, 5);
        delta[{i, i - 1}] = aimc::Rational(3, 5);
    }
    return aimc::MarkovChain(names, delta);
}

void BM_ReachProb(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const aimc::MarkovChain mc = ruin_chain(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aimc::exact::reach_prob(mc, n / 2, n - 1));
    }
}
BENCHMARK(BM_ReachProb)->Arg(8)->Arg(32)->Arg(128);

} // namespace
