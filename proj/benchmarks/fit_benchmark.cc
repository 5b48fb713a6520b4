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

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include <benchmark/benchmark.h>

#include "atlas/fitter.h"
#include "atlas/laws.h"
#include "atlas/synth.h"

namespace atlas {
namespace {

struct Fixture {
  SynthPreset preset = MakeSynthPreset("recovery", 1, 0.01);
  RunSet runs = GenerateRuns(preset.design, preset.catalog);
  AtlasTruth truth = std::get<std::vector<AtlasTruth>>(preset.design.law).front();
};

const Fixture& Data() {
  static const Fixture f;
  return f;
}

void BM_Residuals(benchmark::State& state) {
  const auto& f = Data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Residuals(f.truth.params, f.truth.spec, f.runs, f.preset.catalog));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.runs.size()));
}
BENCHMARK(BM_Residuals);

void BM_FitLaw(benchmark::State& state) {
  const auto& f = Data();
  LawSpec spec = f.truth.spec;
  spec.variant = static_cast<LawVariant>(state.range(0));
  if (spec.variant != LawVariant::kAtlasFull) spec.transfer_set.clear();
  FitConfig config;
  config.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fit(f.runs, spec, f.preset.catalog, config));
  }
  state.SetLabel(std::string(LawVariantName(spec.variant)));
}
BENCHMARK(BM_FitLaw)
    ->Arg(static_cast<int>(LawVariant::kBsl))
    ->Arg(static_cast<int>(LawVariant::kAtlasTarget))
    ->Arg(static_cast<int>(LawVariant::kAtlasFull))
    ->Unit(benchmark::kMillisecond);

void BM_GenerateRuns(benchmark::State& state) {
  const auto& f = Data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(GenerateRuns(f.preset.design, f.preset.catalog));
  }
}
BENCHMARK(BM_GenerateRuns);

}  // namespace
}  // namespace atlas
