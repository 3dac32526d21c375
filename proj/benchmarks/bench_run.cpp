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
#include "asmstarve/exec.hpp"
#include "asmstarve/monitor.hpp"

namespace asmstarve {
namespace {

void BM_RandomRun(benchmark::State& state) {
  Machine m(build_dining_philosophers(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(run_distributed(m, Scheduler::random(1), {}, 1000));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_RandomRun)->RangeMultiplier(2)->Range(2, 64);

void BM_AnnotateAndMonitor(benchmark::State& state) {
  Machine m(build_dining_philosophers(5));
  Trace t = run_distributed(m, Scheduler::random(1), {}, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    AnnotatedTrace at = annotate_trace(m, t);
    benchmark::DoNotOptimize(detect_cyclical_return(at, "thinking", 20));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnnotateAndMonitor)->RangeMultiplier(10)->Range(100, 10000);

}  // namespace
}  // namespace asmstarve
