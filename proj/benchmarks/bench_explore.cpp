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

#include "asmstarve/corpus.hpp"
#include "asmstarve/explore.hpp"

namespace asmstarve {
namespace {

void BM_ExplorePhilosophers(benchmark::State& state) {
  Machine m(build_dining_philosophers(static_cast<std::size_t>(state.range(0))));
  std::size_t nodes = 0;
  for (auto _ : state) {
    StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{40, 1000000});
    nodes = g.nodes.size();
    benchmark::DoNotOptimize(g);
  }
  state.counters["states"] = static_cast<double>(nodes);
}
BENCHMARK(BM_ExplorePhilosophers)->DenseRange(2, 9)->Unit(benchmark::kMillisecond);

void BM_ExploreRouteDiscovery(benchmark::State& state) {
  AodvOptions o;
  o.topology = parse_topology(static_cast<std::size_t>(state.range(0)), "line");
  o.with_timeout = true;
  auto inst = build_aodv(o);
  Machine m(inst.model);
  for (auto _ : state) {
    StateGraph g = enumerate_interleavings(m, inst.env, ExploreOptions{60, 1000000});
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_ExploreRouteDiscovery)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_GraphCoherence(benchmark::State& state) {
  Machine m(build_dining_philosophers(static_cast<std::size_t>(state.range(0))));
  StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{40, 1000000});
  for (auto _ : state) benchmark::DoNotOptimize(check_graph_coherence(m, g));
}
BENCHMARK(BM_GraphCoherence)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace asmstarve
