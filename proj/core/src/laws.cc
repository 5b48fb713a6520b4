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

#include "atlas/laws.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace atlas {

std::string_view LawVariantName(LawVariant variant) {
  switch (variant) {
    case LawVariant::kBsl:
      return "bsl";
    case LawVariant::kAtlasTarget:
      return "atlas_target";
    case LawVariant::kAtlasOther:
      return "atlas_other";
    case LawVariant::kAtlasFull:
      return "atlas_full";
  }
  return "?";
}

LawVariant ParseLawVariant(std::string_view name) {
  for (auto v : {LawVariant::kBsl, LawVariant::kAtlasTarget,
                 LawVariant::kAtlasOther, LawVariant::kAtlasFull}) {
    if (LawVariantName(v) == name) return v;
  }
  throw DataError("unknown law variant '" + std::string(name) +
                  "' (expected bsl, atlas_target, atlas_other, atlas_full)");
}

bool UsesSaturation(LawVariant variant) { return variant != LawVariant::kBsl; }

bool UsesOtherTerm(LawVariant variant) {
  return variant == LawVariant::kAtlasOther || variant == LawVariant::kAtlasFull;
}

bool UsesTransferTerms(LawVariant variant) {
  return variant == LawVariant::kAtlasFull;
}

void LawSpec::Validate() const {
  if (target_language.empty()) throw DataError("law spec: empty target language");
  if (!UsesTransferTerms(variant) && !transfer_set.empty()) {
    throw DataError("law spec: transfer set is only allowed for atlas_full");
  }
  std::set<Language> seen;
  for (const auto& lang : transfer_set) {
    if (lang == target_language) {
      throw DataError("law spec: transfer set contains the target '" + lang +
                      "'");
    }
    if (!seen.insert(lang).second) {
      throw DataError("law spec: duplicate transfer language '" + lang + "'");
    }
  }
}

void LawParams::Validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("law params: ") + what);
  };
  check(e_irreducible >= 0.0 && std::isfinite(e_irreducible), "E must be >= 0");
  check(std::isfinite(log_a) && std::isfinite(log_b), "log_a/log_b not finite");
  check(alpha > 0.0 && alpha <= LawBounds::kExponentMax, "alpha outside (0, 2]");
  check(beta > 0.0 && beta <= LawBounds::kExponentMax, "beta outside (0, 2]");
  if (UsesSaturation(variant)) check(lambda > 0.0, "lambda must be positive");
  if (!UsesTransferTerms(variant)) {
    check(tau_transfer.empty(), "tau_transfer only allowed for atlas_full");
  }
  for (const auto& [lang, tau] : tau_transfer) {
    check(tau >= LawBounds::kTauMin && tau <= LawBounds::kTauMax,
          "tau_transfer outside [0, 1]");
  }
  if (UsesOtherTerm(variant)) {
    check(tau_other >= LawBounds::kTauMin && tau_other <= LawBounds::kTauMax,
          "tau_other outside [0, 1]");
  } else {
    check(tau_other == 0.0, "tau_other only allowed for atlas_other/atlas_full");
  }
}

double Saturation(double d, double u, double lambda) {
  if (!(u > 0.0)) throw DomainError("saturation: unique tokens must be positive");
  if (!(lambda > 0.0)) throw DomainError("saturation: lambda must be positive");
  if (!(d >= 0.0)) throw DomainError("saturation: tokens must be nonnegative");
  if (d <= u) return d;
  return u * (1.0 - std::expm1(-lambda * (d / u - 1.0)) / lambda);
}

namespace {

double SaturatedTerm(TokenCount d, double u, const LawParams& params) {
  if (d == 0) return 0.0;
  return Saturation(static_cast<double>(d), u, params.lambda);
}

}  // namespace

double EffectiveData(const TokenBreakdown& breakdown,
                     const CorpusCatalog& catalog, const LawParams& params) {
  if (!UsesSaturation(params.variant)) {
    return static_cast<double>(breakdown.d_target);
  }
  const double u_target =
      static_cast<double>(catalog.UniqueTokens(breakdown.target));
  double d_eff = SaturatedTerm(breakdown.d_target, u_target, params);
  if (UsesTransferTerms(params.variant)) {
    for (const auto& [lang, d] : breakdown.d_transfer) {
      auto it = params.tau_transfer.find(lang);
      const double tau = it == params.tau_transfer.end() ? 0.0 : it->second;
      const double u = static_cast<double>(catalog.UniqueTokens(lang));
      d_eff += tau * SaturatedTerm(d, u, params);
    }
  }
  if (UsesOtherTerm(params.variant) && breakdown.d_other > 0) {
    double u_other = 0.0;
    for (const auto& lang : breakdown.other_languages) {
      u_other += static_cast<double>(catalog.UniqueTokens(lang));
    }
    if (u_other > 0.0) {
      d_eff +=
          params.tau_other * SaturatedTerm(breakdown.d_other, u_other, params);
    } else if (static_cast<double>(breakdown.d_other) >
               1e-6 * static_cast<double>(breakdown.Total())) {
      // A remainder within logging slack has no languages behind it.
      throw DataError("no languages recorded for " +
                      std::to_string(breakdown.d_other) + " remainder tokens");
    }
  }
  return d_eff;
}

double PredictLoss(const LawParams& params, double n, double d_eff) {
  if (!(n > 0.0)) throw DomainError("predict_loss: n must be positive");
  if (!(d_eff > 0.0)) throw DomainError("predict_loss: d_eff must be positive");
  return params.e_irreducible +
         std::exp(params.log_a - params.alpha * std::log(n)) +
         std::exp(params.log_b - params.beta * std::log(d_eff));
}

double LossModel::PredictRun(const RunRecord& run) const {
  const auto& s = spec();
  return Predict(static_cast<double>(run.n_params),
                 TokenAccounting(run, s.target_language, s.transfer_set));
}

AtlasLaw::AtlasLaw(LawSpec spec, LawParams params, CorpusCatalog catalog)
    : spec_(std::move(spec)),
      params_(std::move(params)),
      catalog_(std::move(catalog)) {
  spec_.Validate();
  if (params_.variant != spec_.variant) {
    throw DataError("law params variant does not match the law spec");
  }
  params_.Validate();
}

double AtlasLaw::Predict(double n_params,
                         const TokenBreakdown& breakdown) const {
  return PredictLoss(params_, n_params,
                     EffectiveData(breakdown, catalog_, params_));
}

}  // namespace atlas
