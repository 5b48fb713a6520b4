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

#include "atlas/transfer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "atlas/error.h"
#include "atlas/table_io.h"

namespace atlas {
namespace {

// Fraction of the way from a to b in the interpolation coordinate.
double SegmentCoordinate(double t0, double t1, double t) {
  if (t0 == 0.0) return (t - t0) / (t1 - t0);
  return (std::log(t) - std::log(t0)) / (std::log(t1) - std::log(t0));
}

double SegmentTokens(double t0, double t1, double frac) {
  if (frac <= 0.0) return t0;
  if (frac >= 1.0) return t1;
  if (t0 == 0.0) return t0 + frac * (t1 - t0);
  return std::exp(std::log(t0) + frac * (std::log(t1) - std::log(t0)));
}

std::string CurveName(const LearningCurve& c) {
  return "curve '" + c.regime_id() + "' on '" + c.eval_language() + "'";
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments PopulationMoments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(v.size()));
  return m;
}

}  // namespace

double LossAt(const LearningCurve& curve, double tokens) {
  const auto pts = curve.points();
  if (!(tokens >= pts.front().tokens && tokens <= pts.back().tokens)) {
    throw DomainError(CurveName(curve) + ": tokens " + FormatDouble(tokens) +
                      " outside [" + FormatDouble(pts.front().tokens) + ", " +
                      FormatDouble(pts.back().tokens) + "], no extrapolation");
  }
  auto it = std::lower_bound(
      pts.begin(), pts.end(), tokens,
      [](const CurvePoint& p, double t) { return p.tokens < t; });
  if (it->tokens == tokens) return it->loss;
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double frac = SegmentCoordinate(lo.tokens, hi.tokens, tokens);
  return lo.loss + frac * (hi.loss - lo.loss);
}

LearningCurve RunningMinimum(const LearningCurve& curve) {
  std::vector<CurvePoint> pts(curve.points().begin(), curve.points().end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    pts[i].loss = std::min(pts[i].loss, pts[i - 1].loss);
  }
  return LearningCurve(curve.regime_id(), curve.eval_language(), std::move(pts));
}

std::optional<double> TokensToReach(const LearningCurve& curve,
                                    double target_loss) {
  const LearningCurve smooth = RunningMinimum(curve);
  const auto pts = smooth.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].loss > target_loss) continue;
    if (i == 0) return pts[0].tokens;
    const CurvePoint& lo = pts[i - 1];
    const CurvePoint& hi = pts[i];
    if (hi.loss == target_loss) return hi.tokens;
    const double frac = (lo.loss - target_loss) / (lo.loss - hi.loss);
    return SegmentTokens(lo.tokens, hi.tokens, frac);
  }
  return std::nullopt;
}

double BtsFromTokens(double d_bi, double d_mono) {
  if (!(d_mono > 0.0)) throw DomainError("bts: d_mono must be positive");
  return (2.0 * d_mono - d_bi) / d_mono;
}

std::optional<double> Bts(const LearningCurve& mono,
                          const LearningCurve& bilingual, double d_mono) {
  const double target = LossAt(mono, d_mono);
  const auto d_bi = TokensToReach(bilingual, target);
  if (!d_bi) return std::nullopt;
  return BtsFromTokens(*d_bi, d_mono);
}

double Fas(double baseline_loss, const LearningCurve& finetune_curve,
           double d_max) {
  if (!(d_max > 0.0)) throw DomainError("fas: d_max must be positive");
  const auto pts = finetune_curve.points();
  if (pts.front().tokens != 0.0 || pts.back().tokens < d_max) {
    throw DataError(CurveName(finetune_curve) + ": coverage gap, points span [" +
                    FormatDouble(pts.front().tokens) + ", " +
                    FormatDouble(pts.back().tokens) + "] but fas needs [0, " +
                    FormatDouble(d_max) + "]");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double t0 = pts[i - 1].tokens;
    if (t0 >= d_max) break;
    const double t1 = std::min(pts[i].tokens, d_max);
    const double l0 = pts[i - 1].loss;
    const double l1 = t1 == pts[i].tokens ? pts[i].loss : LossAt(finetune_curve, t1);
    area += 0.5 * (t1 - t0) * ((baseline_loss - l0) + (baseline_loss - l1));
  }
  return area / d_max;
}

FeatureSet BuildFeatures(const CurveBank& bank, double d_max) {
  const auto& langs = bank.languages;
  if (langs.size() < 2) throw DataError("features: need at least 2 languages");
  auto curve = [&](const Language& s, const Language& t) -> const LearningCurve& {
    auto it = bank.finetune.find({s, t});
    if (it == bank.finetune.end()) {
      throw DataError("features: missing finetuning curve " + s + " -> " + t);
    }
    return it->second;
  };
  auto baseline = [&](const Language& t) {
    auto it = bank.baselines.find(t);
    if (it == bank.baselines.end()) {
      throw DataError("features: missing baseline loss for '" + t + "'");
    }
    return it->second;
  };

  FeatureSet out;
  std::vector<double> gains;
  for (const auto& l : langs) {
    const double g = Fas(baseline(l), curve(l, l), d_max);
    out.gain[l] = g;
    gains.push_back(g);
  }
  const Moments gm = PopulationMoments(gains);
  if (!(gm.sd > 0.0)) {
    throw DataError("features: zero standard deviation in group 'adaptation gain'");
  }
  for (const auto& l : langs) out.gain_z[l] = (out.gain[l] - gm.mean) / gm.sd;

  std::map<LanguagePair, double> delta_z;
  for (const auto& t : langs) {
    std::vector<double> deltas;
    for (const auto& s : langs) {
      if (s == t) continue;
      deltas.push_back(LossAt(curve(s, t), d_max) - baseline(t));
    }
    const Moments dm = PopulationMoments(deltas);
    if (!(dm.sd > 0.0)) {
      throw DataError("features: zero standard deviation in group "
                      "'baseline deviation, target " + t + "'");
    }
    std::size_t i = 0;
    for (const auto& s : langs) {
      if (s == t) continue;
      delta_z[{s, t}] = (deltas[i++] - dm.mean) / dm.sd;
    }
  }

  for (const auto& s : langs) {
    for (const auto& t : langs) {
      if (s == t) continue;
      PairFeatures pf{s, t, {}};
      pf.x = {out.gain_z[s], out.gain_z[t], out.gain_z[s] - out.gain_z[t],
              delta_z[{s, t}]};
      out.pairs.push_back(std::move(pf));
    }
  }
  return out;
}

const char* CellProvenanceName(CellProvenance p) {
  switch (p) {
    case CellProvenance::kNotApplicable: return "n/a";
    case CellProvenance::kMeasured: return "measured";
    case CellProvenance::kEstimated: return "estimated";
  }
  return "?";
}

TransferMatrix BuildTransferMatrix(const std::map<LanguagePair, double>& measured,
                                   const std::vector<Language>& languages,
                                   const CurveBank* bank, double d_max,
                                   const ForestConfig& config) {
  const std::size_t n = languages.size();
  std::map<Language, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(languages[i], i).second) {
      throw DataError("transfer matrix: duplicate language '" + languages[i] + "'");
    }
  }
  if (measured.empty()) {
    throw DataError("transfer matrix: no measured pairs to train on");
  }

  TransferMatrix m;
  m.languages = languages;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.scores.assign(n, std::vector<double>(n, nan));
  m.provenance.assign(n, std::vector<CellProvenance>(n, CellProvenance::kNotApplicable));
  for (const auto& [pair, score] : measured) {
    auto s = index.find(pair.first);
    auto t = index.find(pair.second);
    if (s == index.end() || t == index.end()) {
      throw DataError("transfer matrix: measured pair " + pair.first + " -> " +
                      pair.second + " is outside the language grid");
    }
    if (s->second == t->second) {
      throw DataError("transfer matrix: diagonal pair " + pair.first + " -> " +
                      pair.second + " has no transfer score");
    }
    m.scores[s->second][t->second] = score;
    m.provenance[s->second][t->second] = CellProvenance::kMeasured;
  }
  if (measured.size() == n * (n - 1)) return m;

  if (bank == nullptr) {
    throw DataError("transfer matrix: curves are needed to estimate unmeasured pairs");
  }
  CurveBank grid = *bank;
  grid.languages = languages;
  const FeatureSet features = BuildFeatures(grid, d_max);

  FeatureMatrix train_x(4);
  std::vector<double> train_y;
  for (const auto& pf : features.pairs) {
    auto it = measured.find({pf.source, pf.target});
    if (it == measured.end()) continue;
    train_x.AddRow(pf.x);
    train_y.push_back(it->second);
  }
  const Forest forest = Forest::Train(train_x, train_y, config);
  m.forest_seed = config.seed;
  m.forest_trees = forest.n_trees();
  for (const auto& pf : features.pairs) {
    const std::size_t s = index.at(pf.source);
    const std::size_t t = index.at(pf.target);
    if (m.provenance[s][t] == CellProvenance::kMeasured) continue;
    m.scores[s][t] = forest.Predict(pf.x);
    m.provenance[s][t] = CellProvenance::kEstimated;
  }
  return m;
}

}  // namespace atlas
