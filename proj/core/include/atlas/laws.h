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

#ifndef ATLAS_LAWS_H_
#define ATLAS_LAWS_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/run_data.h"

namespace atlas {

// The Chinchilla baseline and the three ablations of the transfer-aware law.
//   kBsl          D_eff = D_t (no repetition saturation)
//   kAtlasTarget  D_eff = S(D_t; U_t)
//   kAtlasOther   D_eff = S(D_t; U_t) + tau_other * S(D_other; U_other)
//   kAtlasFull    D_eff = S(D_t; U_t) + sum_i tau_i * S(D_i; U_i)
//                        + tau_other * S(D_other; U_other)
enum class LawVariant { kBsl, kAtlasTarget, kAtlasOther, kAtlasFull };

std::string_view LawVariantName(LawVariant variant);
// Accepts bsl, atlas_target, atlas_other, atlas_full.
LawVariant ParseLawVariant(std::string_view name);

bool UsesSaturation(LawVariant variant);
bool UsesOtherTerm(LawVariant variant);
bool UsesTransferTerms(LawVariant variant);

struct LawSpec {
  LawVariant variant = LawVariant::kAtlasTarget;
  Language target_language;
  // Non-empty only for kAtlasFull.
  std::vector<Language> transfer_set;

  // Throws DataError.
  void Validate() const;
  friend bool operator==(const LawSpec&, const LawSpec&) = default;
};

// Parameter bounds shared by the fitter and validation.
struct LawBounds {
  static constexpr double kExponentMin = 1e-3;
  static constexpr double kExponentMax = 2.0;
  static constexpr double kTauMin = 0.0;
  static constexpr double kTauMax = 1.0;
};

struct LawParams {
  LawVariant variant = LawVariant::kAtlasTarget;
  double e_irreducible = 0.0;  // E >= 0
  double log_a = 0.0;          // A = exp(log_a)
  double log_b = 0.0;          // B = exp(log_b)
  double alpha = 0.3;          // (0, 2]
  double beta = 0.3;           // (0, 2]
  double lambda = 1.0;         // repetition decay, shared by all sources
  std::map<Language, double> tau_transfer;  // [0, 1], kAtlasFull only
  double tau_other = 0.0;                   // [0, 1]

  // Bounds and variant-dependent presence of tau fields. Throws DomainError.
  void Validate() const;

  friend bool operator==(const LawParams&, const LawParams&) = default;
};

// Effective tokens after repetition: identity up to one epoch (d <= u), then
// u * (1 + (1 - exp(-lambda * (d/u - 1))) / lambda). Bounded by u*(1+1/lambda).
double Saturation(double d, double u, double lambda);

// D_eff of one run for the variant in `params`. U for the pooled remainder is
// the sum of catalog U over `breakdown.other_languages`. Terms with zero
// tokens need no catalog entry. Throws DataError naming a missing language.
double EffectiveData(const TokenBreakdown& breakdown,
                     const CorpusCatalog& catalog, const LawParams& params);

// E + exp(log_a) / n^alpha + exp(log_b) / d_eff^beta.
double PredictLoss(const LawParams& params, double n, double d_eff);

// Plug-in point for third-party laws in holdout comparisons. A model sees a
// run through its token breakdown relative to its own transfer set.
class LossModel {
 public:
  virtual ~LossModel() = default;
  virtual const LawSpec& spec() const = 0;
  virtual double Predict(double n_params,
                         const TokenBreakdown& breakdown) const = 0;

  // Token accounting against spec() then Predict.
  double PredictRun(const RunRecord& run) const;
};

class AtlasLaw final : public LossModel {
 public:
  AtlasLaw(LawSpec spec, LawParams params, CorpusCatalog catalog);

  const LawSpec& spec() const override { return spec_; }
  const LawParams& params() const { return params_; }
  double Predict(double n_params,
                 const TokenBreakdown& breakdown) const override;

 private:
  LawSpec spec_;
  LawParams params_;
  CorpusCatalog catalog_;
};

}  // namespace atlas

#endif  // ATLAS_LAWS_H_
