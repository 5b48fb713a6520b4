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

#include "atlas/holdout_eval.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "atlas/error.h"
#include "atlas/metrics.h"
#include "atlas/random.h"
#include "atlas/table_io.h"

namespace atlas {
namespace {

bool IsUnimax(const std::string& mixture_id) {
  std::string lower = mixture_id;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower.find("unimax") != std::string::npos;
}

std::size_t HeldCount(std::size_t n, double fraction) {
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(count, 1, n);
}

// Marks the `count` rows with the largest key; ties keep row order.
std::vector<bool> TopByKey(const RunSet& runs, std::size_t count,
                           const std::function<double(const RunRecord&)>& key) {
  std::vector<std::size_t> order(runs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key(runs[a]) > key(runs[b]);
  });
  std::vector<bool> held(runs.size(), false);
  for (std::size_t i = 0; i < count; ++i) held[order[i]] = true;
  return held;
}

}  // namespace

std::string_view SplitAxisName(SplitAxis axis) {
  switch (axis) {
    case SplitAxis::kRandom: return "random";
    case SplitAxis::kN: return "n";
    case SplitAxis::kD: return "d";
    case SplitAxis::kC: return "c";
    case SplitAxis::kM: return "m";
  }
  return "?";
}

SplitAxis ParseSplitAxis(std::string_view name) {
  for (auto axis : {SplitAxis::kRandom, SplitAxis::kN, SplitAxis::kD,
                    SplitAxis::kC, SplitAxis::kM}) {
    if (SplitAxisName(axis) == name) return axis;
  }
  throw DataError("unknown split axis '" + std::string(name) +
                  "' (expected random, n, d, c or m)");
}

std::string SplitAxisLabel(SplitAxis axis) {
  switch (axis) {
    case SplitAxis::kRandom: return "R2";
    case SplitAxis::kN: return "R2(N)";
    case SplitAxis::kD: return "R2(D)";
    case SplitAxis::kC: return "R2(C)";
    case SplitAxis::kM: return "R2(M)";
  }
  return "?";
}

void SplitSpec::Validate() const {
  const std::string name(SplitAxisName(axis));
  const bool uses_fraction =
      axis == SplitAxis::kRandom || axis == SplitAxis::kD || axis == SplitAxis::kC;
  if (uses_fraction && !(fraction > 0.0 && fraction < 1.0)) {
    throw DataError("split " + name + ": fraction must be in (0, 1), got " +
                    FormatDouble(fraction));
  }
  if (axis != SplitAxis::kN && !held_scales.empty()) {
    throw DataError("split " + name + ": held_scales only applies to axis n");
  }
  if (axis != SplitAxis::kM && !held_mixtures.empty()) {
    throw DataError("split " + name + ": held_mixtures only applies to axis m");
  }
}

Split SplitRuns(const RunSet& runs, const SplitSpec& spec) {
  spec.Validate();
  const std::string name(SplitAxisName(spec.axis));
  if (runs.empty()) throw DataError("split " + name + ": no runs");
  std::vector<bool> held(runs.size(), false);

  switch (spec.axis) {
    case SplitAxis::kRandom: {
      Rng rng(MixSeed(spec.seed, 0x5A17));
      const auto perm = rng.Permutation(runs.size());
      const std::size_t count = HeldCount(runs.size(), spec.fraction);
      for (std::size_t i = 0; i < count; ++i) held[perm[i]] = true;
      break;
    }
    case SplitAxis::kD:
      held = TopByKey(runs, HeldCount(runs.size(), spec.fraction),
                      [](const RunRecord& r) { return static_cast<double>(r.total_tokens); });
      break;
    case SplitAxis::kC:
      held = TopByKey(runs, HeldCount(runs.size(), spec.fraction), [](const RunRecord& r) {
        return 6.0 * static_cast<double>(r.n_params) * static_cast<double>(r.total_tokens);
      });
      break;
    case SplitAxis::kN: {
      std::set<std::int64_t> scales(spec.held_scales.begin(), spec.held_scales.end());
      if (scales.empty()) {
        std::set<std::int64_t> all;
        for (const auto& r : runs) all.insert(r.n_params);
        auto it = all.rbegin();
        for (int i = 0; i < 2 && it != all.rend(); ++i, ++it) scales.insert(*it);
      }
      for (std::size_t i = 0; i < runs.size(); ++i) held[i] = scales.count(runs[i].n_params) > 0;
      break;
    }
    case SplitAxis::kM: {
      std::set<std::string> ids(spec.held_mixtures.begin(), spec.held_mixtures.end());
      for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        held[i] = ids.empty() ? r.MixtureLanguages().size() >= 3 && !IsUnimax(r.mixture_id)
                              : ids.count(r.mixture_id) > 0;
      }
      break;
    }
  }

  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < runs.size(); ++i) (held[i] ? test : train).push_back(i);
  if (test.empty()) throw DataError("split " + name + ": held-out side is empty");
  if (train.empty()) throw DataError("split " + name + ": training side is empty");
  return {runs.Subset(train), runs.Subset(test)};
}

ModelFactory FittingFactory(CorpusCatalog catalog, FitConfig config) {
  return [catalog = std::move(catalog), config = std::move(config)](
             const RunSet& train, const LawSpec& spec) -> std::unique_ptr<LossModel> {
    auto fit = Fit(train, spec, catalog, config);
    return std::make_unique<AtlasLaw>(spec, std::move(fit.params), catalog);
  };
}

ModelFactory FixedParamsFactory(CorpusCatalog catalog,
                                std::map<Language, LawParams> params) {
  return [catalog = std::move(catalog), params = std::move(params)](
             const RunSet&, const LawSpec& spec) -> std::unique_ptr<LossModel> {
    auto it = params.find(spec.target_language);
    if (it == params.end()) {
      throw DataError("no parameters for language '" + spec.target_language + "'");
    }
    return std::make_unique<AtlasLaw>(spec, it->second, catalog);
  };
}

const AxisResult* EvalReport::Find(SplitAxis axis) const {
  for (const auto& a : axes) {
    if (a.axis == axis) return &a;
  }
  return nullptr;
}

EvalReport EvaluateSuite(const RunSet& runs, std::span<const LawSpec> specs,
                         const ModelFactory& factory,
                         std::span<const SplitSpec> splits, Averaging averaging) {
  if (specs.empty()) throw DataError("evaluate: no law specs");
  if (splits.empty()) throw DataError("evaluate: no split axes");
  EvalReport report;
  report.variant = specs.front().variant;
  report.averaging = averaging;
  for (const auto& s : specs) {
    if (s.variant != report.variant) {
      throw DataError("evaluate: all languages must use the same law variant");
    }
  }

  for (const auto& split_spec : splits) {
    const std::string axis_name(SplitAxisName(split_spec.axis));
    AxisResult result;
    result.axis = split_spec.axis;
    const Split split = SplitRuns(runs, split_spec);
    std::vector<double> pooled_pred, pooled_obs;
    double sum = 0.0;
    for (const auto& spec : specs) {
      const Language& lang = spec.target_language;
      const auto train_idx = UsableRunIndices(split.train, spec);
      const auto test_idx = UsableRunIndices(split.test, spec);
      if (train_idx.empty() || test_idx.empty()) {
        result.skipped[lang] = train_idx.empty() ? "no training rows" : "no held-out rows";
        continue;
      }
      try {
        const auto model = factory(split.train.Subset(train_idx), spec);
        std::vector<double> pred, obs;
        for (std::size_t i : test_idx) {
          pred.push_back(model->PredictRun(split.test[i]));
          obs.push_back(split.test[i].loss);
        }
        const double mean = std::accumulate(obs.begin(), obs.end(), 0.0) /
                            static_cast<double>(obs.size());
        const bool constant = std::all_of(obs.begin(), obs.end(),
                                          [&](double o) { return o == mean; });
        pooled_pred.insert(pooled_pred.end(), pred.begin(), pred.end());
        pooled_obs.insert(pooled_obs.end(), obs.begin(), obs.end());
        if (constant) {
          result.skipped[lang] = "held-out losses have zero variance";
          continue;
        }
        LanguageScore score{RSquared(pred, obs), train_idx.size(), test_idx.size()};
        sum += score.r2;
        result.per_language[lang] = score;
      } catch (const std::exception& e) {
        throw DataError("axis " + axis_name + ", language '" + lang + "': " + e.what());
      }
    }
    if (result.per_language.empty()) {
      throw DataError("axis " + axis_name + ": no language could be scored");
    }
    result.mean_r2 = sum / static_cast<double>(result.per_language.size());
    result.pooled_r2 = RSquared(pooled_pred, pooled_obs);
    result.r2 = averaging == Averaging::kPooled ? result.pooled_r2 : result.mean_r2;
    report.axes.push_back(std::move(result));
  }
  return report;
}

std::string FormatEvalTable(const EvalReport& report) {
  std::set<Language> langs;
  for (const auto& a : report.axes) {
    for (const auto& [l, s] : a.per_language) langs.insert(l);
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"language"};
  for (const auto& a : report.axes) header.push_back(SplitAxisLabel(a.axis));
  rows.push_back(header);
  auto cell = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
  };
  for (const auto& l : langs) {
    std::vector<std::string> row{l};
    for (const auto& a : report.axes) {
      auto it = a.per_language.find(l);
      row.push_back(it == a.per_language.end() ? "-" : cell(it->second.r2));
    }
    rows.push_back(row);
  }
  std::vector<std::string> avg{std::string(LawVariantName(report.variant)) +
                               (report.averaging == Averaging::kPooled ? " (pooled)" : " (avg)")};
  for (const auto& a : report.axes) avg.push_back(cell(a.r2));
  rows.push_back(avg);

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j == 0) {
        out << std::left << std::setw(static_cast<int>(width[j])) << row[j];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[j])) << row[j];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace atlas
