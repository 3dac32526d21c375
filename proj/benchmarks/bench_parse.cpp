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
#include "asmstarve/lang.hpp"

namespace asmstarve {
namespace {

void BM_ParseAndValidate(benchmark::State& state) {
  const std::string text =
      pretty_print(build_dining_philosophers(static_cast<std::size_t>(state.range(0)), DpVariant::kBakery));
  for (auto _ : state) {
    auto r = parse_model(text);
    benchmark::DoNotOptimize(validate_model(*r.model, &r.source_map));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseAndValidate)->RangeMultiplier(4)->Range(2, 128);

void BM_PrettyPrint(benchmark::State& state) {
  Model m = build_dining_philosophers(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pretty_print(m));
}
BENCHMARK(BM_PrettyPrint)->RangeMultiplier(4)->Range(2, 128);

}  // namespace
}  // namespace asmstarve
