// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "aimc/approx.hpp"
#include "aimc/model.hpp"

namespace {

constexpr const char* kModel = R"({
  "vertices": ["s", "t", "f"],
  "transitions": [
    {"from": "s", "to": "t", "lo": "1/4", "hi": "1/2", "lo_strict": false, "hi_strict": false},
    {"from": "s", "to": "f", "lo": "1/2", "hi": "3/4", "lo_strict": false, "hi_strict": false},
    {"from": "t", "to": "t", "p": "1"},
    {"from": "f", "to": "f", "p": "1"}
  ],
  "constraints": []
})";

void BM_ApproxReject(benchmark::State& state) {
    const aimc::AimcModel model = aimc::parse_model(kModel);
    aimc::Query q;
    q.source = 0;
    q.target = 1;
    q.relation = aimc::Relation::Ge;
    q.threshold = aimc::Rational(3, 4);
    q.promise_gap = aimc::Rational(1, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(aimc::approx::approx_decide(model, q).grid_chains_visited);
    }
}
BENCHMARK(BM_ApproxReject)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

} // namespace
