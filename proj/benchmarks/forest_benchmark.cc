// Copyright 2026 The AtlasKit Authors.
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

#include <cmath>
#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "atlas/forest.h"
#include "atlas/random.h"

namespace atlas {
namespace {

void MakeData(std::size_t n, FeatureMatrix* x, std::vector<double>* y) {
  Rng rng(17);
  *x = FeatureMatrix(4);
  y->clear();
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> row{rng.Uniform(), rng.Uniform(), rng.Uniform(), rng.Uniform()};
    x->AddRow(row);
    y->push_back(std::sin(3.0 * row[0]) + row[1] * row[2] + 0.1 * rng.Normal());
  }
}

void BM_ForestTrain(benchmark::State& state) {
  FeatureMatrix x;
  std::vector<double> y;
  MakeData(static_cast<std::size_t>(state.range(0)), &x, &y);
  ForestConfig config;
  config.n_trees = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Forest::Train(x, y, config));
}
BENCHMARK(BM_ForestTrain)->Args({400, 100})->Args({1400, 300})->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  FeatureMatrix x;
  std::vector<double> y;
  MakeData(400, &x, &y);
  const Forest forest = Forest::Train(x, y, ForestConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(forest.Predict(x));
  state.SetItemsProcessed(state.iterations() * 400);
}
BENCHMARK(BM_ForestPredict);

void BM_CrossValidate(benchmark::State& state) {
  FeatureMatrix x;
  std::vector<double> y;
  MakeData(400, &x, &y);
  ForestConfig config;
  config.n_trees = 100;
  for (auto _ : state) benchmark::DoNotOptimize(CrossValidate(x, y, 5, 1, config));
}
BENCHMARK(BM_CrossValidate)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace atlas
