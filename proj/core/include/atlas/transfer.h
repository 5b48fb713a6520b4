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

#ifndef ATLAS_TRANSFER_H_
#define ATLAS_TRANSFER_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "atlas/forest.h"
#include "atlas/run_data.h"

namespace atlas {

// Default step at which the monolingual reference loss is read.
inline constexpr double kDefaultMonoTokens = 42e9;

// Piecewise-linear interpolation in (log tokens, loss). A segment starting at
// zero tokens is interpolated linearly in tokens. Throws DomainError outside
// [first_tokens, last_tokens]; there is no extrapolation.
double LossAt(const LearningCurve& curve, double tokens);

// Running minimum of the losses, so the curve never increases.
LearningCurve RunningMinimum(const LearningCurve& curve);

// Smallest token count at which the running-minimum curve reaches
// `target_loss`; nullopt when it never does.
std::optional<double> TokensToReach(const LearningCurve& curve,
                                    double target_loss);

// -(d_bi - 2 d_mono) / d_mono.
double BtsFromTokens(double d_bi, double d_mono);

// Bilingual transfer score; nullopt when the bilingual curve never reaches
// the monolingual loss at d_mono.
std::optional<double> Bts(const LearningCurve& mono,
                          const LearningCurve& bilingual,
                          double d_mono = kDefaultMonoTokens);

// Mean loss reduction below `baseline_loss` over [0, d_max], trapezoidal on
// the recorded points. Throws DataError unless the curve covers [0, d_max].
double Fas(double baseline_loss, const LearningCurve& finetune_curve,
           double d_max);

using LanguagePair = std::pair<Language, Language>;  // (source, target)

// Finetuning curves keyed by (source checkpoint, target language), plus the
// reference loss of the multilingual baseline on each target.
struct CurveBank {
  std::vector<Language> languages;
  std::map<LanguagePair, LearningCurve> finetune;
  std::map<Language, double> baselines;
};

// [g_s, g_t, g_s - g_t, delta], each already normalized.
using TransferFeatures = std::array<double, 4>;

struct PairFeatures {
  Language source;
  Language target;
  TransferFeatures x{};
};

struct FeatureSet {
  // Raw adaptation gain per language and its normalized value.
  std::map<Language, double> gain;
  std::map<Language, double> gain_z;
  // All off-diagonal pairs, source-major in `languages` order.
  std::vector<PairFeatures> pairs;
};

// Requires a curve for every (source, target) pair including the diagonal
// and a baseline per target. Gains are z-scored over all languages; loss
// deviations per target across sources (population standard deviation).
// Throws DataError naming the group when a standard deviation is zero.
FeatureSet BuildFeatures(const CurveBank& bank, double d_max);

enum class CellProvenance { kNotApplicable, kMeasured, kEstimated };
const char* CellProvenanceName(CellProvenance p);

struct TransferMatrix {
  std::vector<Language> languages;
  // Row = source, column = target. Diagonal cells are NaN.
  std::vector<std::vector<double>> scores;
  std::vector<std::vector<CellProvenance>> provenance;
  std::optional<std::uint64_t> forest_seed;
  std::size_t forest_trees = 0;
};

// Measured cells keep their scores, the rest are predicted by a forest
// trained on the measured cells. The bank is only consulted when some cell
// needs estimating. Throws DataError for pairs outside the grid, diagonal
// pairs, or when nothing is measured.
TransferMatrix BuildTransferMatrix(const std::map<LanguagePair, double>& measured,
                                   const std::vector<Language>& languages,
                                   const CurveBank* bank, double d_max,
                                   const ForestConfig& config);

}  // namespace atlas

#endif  // ATLAS_TRANSFER_H_
