// Copyright 2026 The Facetalk Authors
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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "facetalk/constraint.h"
#include "facetalk/kb.h"
#include "facetalk/kernels.h"

namespace facetalk {
namespace {

using kernels::Composition;
using kernels::TierMatrix;

TierMatrix RandomTiers(size_t rows, size_t dims) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> tier(0, 5);
  TierMatrix m(rows, dims);
  for (int& t : m.tiers) t = tier(rng);
  return m;
}

template <bool kParallel>
void BM_Dominance(benchmark::State& state) {
  TierMatrix m = RandomTiers(static_cast<size_t>(state.range(0)), 4);
  Composition c = Composition::Pareto(4);
  for (auto _ : state) {
    auto d = kParallel ? kernels::parallel::ComputeDominance(m, c)
                       : kernels::serial::ComputeDominance(m, c);
    benchmark::DoNotOptimize(d.data());
  }
  state.SetComplexityN(state.range(0));
}

template <bool kParallel>
void BM_Peel(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  TierMatrix m = RandomTiers(n, 4);
  auto d = kernels::serial::ComputeDominance(m, Composition::Pareto(4));
  for (auto _ : state) {
    auto b = kParallel ? kernels::parallel::PeelBuckets(d, n)
                       : kernels::serial::PeelBuckets(d, n);
    benchmark::DoNotOptimize(b.data());
  }
}

KnowledgeBase SyntheticKb(int items) {
  std::mt19937 rng(9);
  nlohmann::json js = {
      {"id", "bench"},
      {"slots",
       {{{"name", "price"}, {"kind", "numeric"}, {"values", {0, 1000}}},
        {{"name", "grade"},
         {"kind", "categorical"},
         {"ordinal", true},
         {"values", {"low", "mid", "high"}}},
        {{"name", "tags"}, {"kind", "multivalued"}, {"values", {"a", "b", "c", "d"}}}}},
      {"items", nlohmann::json::array()}};
  const char* grades[] = {"low", "mid", "high"};
  const char* tags[] = {"a", "b", "c", "d"};
  for (int i = 0; i < items; ++i) {
    nlohmann::json t = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) {
      if (rng() % 2) t.push_back(tags[k]);
    }
    js["items"].push_back({{"id", "i" + std::to_string(i)},
                           {"slots",
                            {{"price", static_cast<int>(rng() % 1000)},
                             {"grade", grades[rng() % 3]},
                             {"tags", t}}}});
  }
  return LoadKnowledgeBase(js.dump());
}

template <bool kParallel>
void BM_FilterMask(benchmark::State& state) {
  KnowledgeBase kb = SyntheticKb(static_cast<int>(state.range(0)));
  auto cs = ParseConstraintList("price between 100 and 700; grade >= mid; tags = b", kb);
  for (auto _ : state) {
    auto mask = kParallel ? kernels::parallel::FilterMask(kb, cs)
                          : kernels::serial::FilterMask(kb, cs);
    benchmark::DoNotOptimize(mask.data());
  }
}

BENCHMARK(BM_Dominance<false>)->Name("Dominance/serial")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(BM_Dominance<true>)->Name("Dominance/parallel")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(BM_Peel<false>)->Name("Peel/serial")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(BM_Peel<true>)->Name("Peel/parallel")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(BM_FilterMask<false>)->Name("FilterMask/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_FilterMask<true>)->Name("FilterMask/parallel")->Arg(1000)->Arg(20000);

}  // namespace
}  // namespace facetalk

BENCHMARK_MAIN();
