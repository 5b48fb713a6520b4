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

#include <benchmark/benchmark.h>

#include "atlas/capacity.h"
#include "atlas/laws.h"

namespace atlas {
namespace {

void BM_Saturation(benchmark::State& state) {
  double d = 1e9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Saturation(d, 3e8, 1.5));
    d += 1.0;
  }
}
BENCHMARK(BM_Saturation);

void BM_ComputeOptimalMultipliers(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeOptimalMultipliers(0.08, -0.08, 0.34, 0.3, 4.0));
  }
}
BENCHMARK(BM_ComputeOptimalMultipliers);

void BM_Plan(benchmark::State& state) {
  CapacityParams p;
  p.l_inf = 1.5;
  p.log_a = 6.0;
  p.log_b = 6.5;
  p.alpha = 0.34;
  p.beta = 0.3;
  p.phi = 0.08;
  p.psi = -0.08;
  PlanQuery q;
  q.r = 4.0;
  q.baseline = CapacityBaseline{2.0, 1e9, 2e10};
  for (auto _ : state) benchmark::DoNotOptimize(Plan(p, q));
}
BENCHMARK(BM_Plan);

}  // namespace
}  // namespace atlas
