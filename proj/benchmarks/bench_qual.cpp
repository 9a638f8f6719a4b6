// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <string>

#include "aimc/gadgets.hpp"
#include "aimc/qualitative.hpp"

namespace {

// Satisfiable chain of clauses (x_i | x_{i+1} | -x_{i+2}).
std::string chain_cnf(int vars) {
    std::string out = "p cnf " + std::to_string(vars) + " " + std::to_string(vars - 2) + "\n";
    for (int i = 1; i + 2 <= vars; ++i) {
        out += std::to_string(i) + " " + std::to_string(i + 1) + " -" + std::to_string(i + 2) + " 0\n";
    }
    return out;
}

void BM_QualSat(benchmark::State& state) {
    const auto cnf = aimc::gadgets::parse_dimacs(chain_cnf(static_cast<int>(state.range(0))));
    const auto inst = aimc::gadgets::encode_3sat(cnf);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aimc::qual::qual_decide(inst.model, inst.query).decision);
    }
}
BENCHMARK(BM_QualSat)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

} // namespace
