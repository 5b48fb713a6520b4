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

#ifndef ATLAS_TESTS_SUPPORT_TEST_SUPPORT_H_
#define ATLAS_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "atlas/random.h"
#include "atlas/run_data.h"

namespace atlas::testing {

// Number of cases each property test draws.
inline constexpr int kPropertyCases = 200;

inline double LogUniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.Uniform(std::log(lo), std::log(hi)));
}

// Weights over a random nonempty subset of `pool`, summing to 1.
inline std::map<Language, double> RandomWeights(Rng& rng,
                                                const std::vector<Language>& pool) {
  std::map<Language, double> w;
  double sum = 0.0;
  for (const auto& l : pool) {
    if (rng.Uniform() < 0.5) continue;
    w[l] = rng.Uniform(0.05, 1.0);
    sum += w[l];
  }
  if (w.empty()) {
    w[pool[rng.Below(pool.size())]] = 1.0;
    return w;
  }
  for (auto& [l, v] : w) v /= sum;
  return w;
}

// A schema-valid record with exact token bookkeeping.
inline RunRecord RandomRecord(Rng& rng, const std::vector<Language>& pool,
                              const std::string& id) {
  RunRecord r;
  r.run_id = id;
  r.n_params = static_cast<std::int64_t>(LogUniform(rng, 1e6, 1e10));
  r.mixture_id = "mix-" + id;
  r.sampling_weights = RandomWeights(rng, pool);
  TokenCount total = 0;
  for (const auto& [l, w] : r.sampling_weights) {
    const auto t = static_cast<TokenCount>(w * LogUniform(rng, 1e6, 1e11));
    r.cumulative_tokens[l] = t;
    total += t;
  }
  r.total_tokens = total;
  r.eval_language = r.sampling_weights.begin()->first;
  r.loss = rng.Uniform(1.0, 6.0);
  r.token_provenance =
      rng.Uniform() < 0.5 ? TokenProvenance::kLogged : TokenProvenance::kReconstructed;
  return r;
}

// Strictly decreasing curve over strictly increasing positive tokens.
inline LearningCurve RandomDecreasingCurve(Rng& rng, std::size_t points,
                                           bool from_zero = false) {
  std::vector<CurvePoint> pts;
  double t = from_zero ? 0.0 : LogUniform(rng, 1e3, 1e6);
  double loss = rng.Uniform(3.0, 6.0);
  for (std::size_t i = 0; i < points; ++i) {
    pts.push_back({t, loss});
    t = (t == 0.0 ? LogUniform(rng, 1e3, 1e6) : t * rng.Uniform(1.2, 4.0));
    loss -= rng.Uniform(0.01, 0.3);
  }
  return LearningCurve("random", "xx", std::move(pts));
}

}  // namespace atlas::testing

#endif  // ATLAS_TESTS_SUPPORT_TEST_SUPPORT_H_
