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

#ifndef ATLAS_SYNTH_H_
#define ATLAS_SYNTH_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "atlas/capacity.h"
#include "atlas/laws.h"
#include "atlas/run_data.h"
#include "atlas/transfer.h"

namespace atlas {

struct SynthMixture {
  std::string id;
  std::map<Language, double> weights;
};

// Ground truth for one eval language.
struct AtlasTruth {
  LawSpec spec;
  LawParams params;
};

struct SynthDesign {
  // One truth per eval language, or a single capacity law shared by all.
  std::variant<std::vector<AtlasTruth>, CapacityParams> law;
  std::vector<std::int64_t> n_values;
  // Total tokens at each checkpoint of every run, strictly increasing.
  std::vector<TokenCount> token_schedule;
  std::vector<SynthMixture> mixtures;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  // Capacity designs only: languages to evaluate. Empty means every
  // language of the mixture.
  std::vector<Language> eval_languages;

  // Throws DataError.
  void Validate() const;
};

// 6 sizes log-spaced over [1e7, 2e9].
std::vector<std::int64_t> DefaultModelSizes();
// 12 checkpoints log-spaced over [min_tokens, max_tokens].
std::vector<TokenCount> DefaultTokenSchedule(TokenCount min_tokens = 100'000'000,
                                             TokenCount max_tokens = 100'000'000'000);

// Splits `total` by `weights` with largest remainders so the parts sum to
// `total` exactly. Ties go to the earlier language code.
std::map<Language, TokenCount> SplitTokens(TokenCount total,
                                           const std::map<Language, double>& weights);

// One row per (mixture, size, checkpoint, eval language). Transfer-aware truths
// evaluate languages present in the mixture; loss is the law value times
// exp(noise_sigma * z) with z drawn from a per-row seed. Throws DataError
// naming the cell when the law cannot be evaluated there.
RunSet GenerateRuns(const SynthDesign& design, const CorpusCatalog& catalog);

// Loss curve sampling `law` at each point of `schedule` with the same
// multiplicative noise. Throws DataError if the schedule is not strictly
// increasing.
LearningCurve GenerateCurve(std::string regime_id, Language eval_language,
                            const std::function<double(double)>& law,
                            const std::vector<double>& schedule,
                            double noise_sigma, std::uint64_t seed);

struct SynthPreset {
  SynthDesign design;
  CorpusCatalog catalog;
};

// Built-in designs:
//   "recovery"   one target with transfer languages and moderate repetition,
//                6 sizes x 12 checkpoints x 8 mixtures;
//   "saturation" three targets with heavy repetition and strong transfer;
//   "capacity"   capacity law over uniform mixtures of 1 to 8 languages.
// Throws DataError for an unknown name.
// Curves for the transfer pipeline. For every target t: "mono" (t alone),
// "bi:<s>" (50/50 with s), "base" (flat multilingual baseline over
// [0, d_max]) and "ft:<s>" for every source s including t itself. Bilingual
// curves are the mono curve with tokens scaled by 1/(2 - bts(s, t)), so the
// generated scores are exact up to noise and interpolation.
struct TransferCurveSet {
  std::vector<LearningCurve> curves;
  std::map<LanguagePair, double> bts;
  double d_mono = kDefaultMonoTokens;
  double d_max = 1e9;
};
TransferCurveSet GenerateTransferCurves(const std::vector<Language>& languages,
                                        std::uint64_t seed, double noise_sigma);

// "pretrain@<N>" and "finetune@<N>" curves on one language. The finetuned
// checkpoint starts ahead but plateaus higher, so the two cross once.
std::vector<LearningCurve> GenerateCrossoverCurves(
    const std::vector<std::int64_t>& n_values, const Language& language,
    std::uint64_t seed, double noise_sigma);

SynthPreset MakeSynthPreset(std::string_view name, std::uint64_t seed = 0,
                            double noise_sigma = 0.01);
std::vector<std::string> SynthPresetNames();

}  // namespace atlas

#endif  // ATLAS_SYNTH_H_
