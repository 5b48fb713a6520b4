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

#ifndef ATLAS_HOLDOUT_EVAL_H_
#define ATLAS_HOLDOUT_EVAL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/fitter.h"
#include "atlas/laws.h"
#include "atlas/run_data.h"

namespace atlas {

enum class SplitAxis { kRandom, kN, kD, kC, kM };

std::string_view SplitAxisName(SplitAxis axis);
// Accepts "random", "n", "d", "c", "m"; throws DataError otherwise.
SplitAxis ParseSplitAxis(std::string_view name);
// Column label in the text table, e.g. "R2(N)".
std::string SplitAxisLabel(SplitAxis axis);

struct SplitSpec {
  SplitAxis axis = SplitAxis::kRandom;
  // Held-out share for random, d and c.
  double fraction = 0.2;
  // Axis n: held-out model sizes. Empty means the two largest in the data.
  std::vector<std::int64_t> held_scales;
  // Axis m: held-out mixture ids. Empty means every mixture with three or
  // more languages that is not a unimax mixture.
  std::vector<std::string> held_mixtures;
  std::uint64_t seed = 0;

  // Throws DataError when a field not used by the axis is set or the
  // fraction is outside (0, 1).
  void Validate() const;
};

struct Split {
  RunSet train;
  RunSet test;
};

// Both sides keep the original row order. Throws DataError when either side
// would be empty.
Split SplitRuns(const RunSet& runs, const SplitSpec& spec);

// Builds the model evaluated on the test side from the training rows.
using ModelFactory =
    std::function<std::unique_ptr<LossModel>(const RunSet& train, const LawSpec& spec)>;

// Fits the spec's law on the training rows.
ModelFactory FittingFactory(CorpusCatalog catalog, FitConfig config);
// Ignores the training rows and returns fixed parameters per language.
ModelFactory FixedParamsFactory(CorpusCatalog catalog,
                                std::map<Language, LawParams> params);

enum class Averaging { kPerLanguage, kPooled };

struct LanguageScore {
  double r2 = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

struct AxisResult {
  SplitAxis axis = SplitAxis::kRandom;
  // Reported value: mean of per-language R2 or pooled R2 per `averaging`.
  double r2 = 0.0;
  double mean_r2 = 0.0;
  double pooled_r2 = 0.0;
  std::map<Language, LanguageScore> per_language;
  // Languages without enough rows on one side, with the reason.
  std::map<Language, std::string> skipped;
};

struct EvalReport {
  LawVariant variant = LawVariant::kAtlasFull;
  Averaging averaging = Averaging::kPerLanguage;
  std::vector<AxisResult> axes;

  const AxisResult* Find(SplitAxis axis) const;
};

// For each split: fit on the training rows of each language, predict its
// test rows, score R2. Errors carry the axis and language.
EvalReport EvaluateSuite(const RunSet& runs, std::span<const LawSpec> specs,
                         const ModelFactory& factory,
                         std::span<const SplitSpec> splits,
                         Averaging averaging = Averaging::kPerLanguage);

// Aligned columns: one row per language plus the reported average.
std::string FormatEvalTable(const EvalReport& report);

}  // namespace atlas

#endif  // ATLAS_HOLDOUT_EVAL_H_
