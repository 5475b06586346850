// Copyright 2026 The Triage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "triage/annotation/kappa.h"

namespace {

std::vector<std::vector<std::int64_t>> Table(std::size_t items, std::size_t categories) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, categories - 1);
  std::vector<std::vector<std::int64_t>> t(items, std::vector<std::int64_t>(categories, 0));
  for (auto& row : t) {
    for (int r = 0; r < 3; ++r) ++row[pick(rng)];
  }
  return t;
}

// A large-scale batch is 500 items; the full corpus is ~15k.
void BM_FleissKappa(benchmark::State& state) {
  auto const t = Table(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(triage::annotation::FleissKappa(t).kappa);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FleissKappa)->Arg(100)->Arg(500)->Arg(15000);

}  // namespace

BENCHMARK_MAIN();
