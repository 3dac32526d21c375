// Copyright 2026 The asmstarve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "asmstarve/analysis.hpp"
#include "asmstarve/corpus.hpp"

namespace asmstarve {
namespace {

void BM_RiskyFunctions(benchmark::State& state) {
  Machine m(build_dining_philosophers(static_cast<std::size_t>(state.range(0)), DpVariant::kBakery));
  for (auto _ : state) benchmark::DoNotOptimize(compute_risky_functions(m));
}
BENCHMARK(BM_RiskyFunctions)->RangeMultiplier(2)->Range(2, 32);

void BM_SyntacticAnalysis(benchmark::State& state) {
  Machine m(build_dining_philosophers(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(certify_starvation_free(m));
}
BENCHMARK(BM_SyntacticAnalysis)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_ExplorationAnalysis(benchmark::State& state) {
  Machine m(build_dining_philosophers(static_cast<std::size_t>(state.range(0))));
  AnalysisOptions o;
  o.mode = Method::kExploration;
  for (auto _ : state) benchmark::DoNotOptimize(certify_starvation_free(m, o));
}
BENCHMARK(BM_ExplorationAnalysis)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

void BM_RouteDiscoveryAnalysis(benchmark::State& state) {
  AodvOptions o;
  o.topology = parse_topology(static_cast<std::size_t>(state.range(0)), "line");
  o.with_timeout = state.range(1) != 0;
  Machine m(build_aodv(o).model);
  for (auto _ : state) benchmark::DoNotOptimize(certify_starvation_free(m));
}
BENCHMARK(BM_RouteDiscoveryAnalysis)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace asmstarve
