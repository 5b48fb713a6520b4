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

#include "atlas/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atlas/error.h"
#include "atlas/random.h"
#include "atlas/table_io.h"

namespace atlas {
namespace {

template <typename T>
std::vector<T> LogSpaced(double lo, double hi, std::size_t count) {
  std::vector<T> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(static_cast<T>(std::llround(std::exp(
        std::log(lo) + f * (std::log(hi) - std::log(lo))))));
  }
  return out;
}

double Noise(double sigma, std::uint64_t seed) {
  if (sigma == 0.0) return 1.0;
  Rng rng(seed);
  return std::exp(sigma * rng.Normal());
}

bool UniformWeights(const std::map<Language, double>& weights) {
  double first = -1.0;
  for (const auto& [lang, w] : weights) {
    if (w <= 0.0) continue;
    if (first < 0.0) first = w;
    if (std::fabs(w - first) > 1e-9) return false;
  }
  return true;
}

}  // namespace

void SynthDesign::Validate() const {
  if (n_values.empty()) throw DataError("synth: empty model-size grid");
  if (token_schedule.empty()) throw DataError("synth: empty token schedule");
  if (mixtures.empty()) throw DataError("synth: no mixtures");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw DataError("synth: noise_sigma must be finite and >= 0");
  }
  for (auto n : n_values) {
    if (n <= 0) throw DataError("synth: model sizes must be positive");
  }
  for (std::size_t i = 0; i < token_schedule.size(); ++i) {
    if (token_schedule[i] <= 0 || (i > 0 && token_schedule[i] <= token_schedule[i - 1])) {
      throw DataError("synth: token schedule must be positive and strictly increasing");
    }
  }
  for (const auto& m : mixtures) {
    if (m.id.empty()) throw DataError("synth: mixture without id");
    double sum = 0.0;
    for (const auto& [lang, w] : m.weights) {
      if (!(w >= 0.0)) throw DataError("synth: mixture '" + m.id + "' has a negative weight");
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw DataError("synth: weights of mixture '" + m.id + "' sum to " +
                      FormatDouble(sum));
    }
  }
  if (const auto* truths = std::get_if<std::vector<AtlasTruth>>(&law)) {
    if (truths->empty()) throw DataError("synth: no ground-truth laws");
    for (const auto& t : *truths) {
      t.spec.Validate();
      t.params.Validate();
      if (t.params.variant != t.spec.variant) {
        throw DataError("synth: truth for '" + t.spec.target_language +
                        "' mixes law variants");
      }
    }
  } else {
    std::get<CapacityParams>(law).Validate();
  }
}

std::vector<std::int64_t> DefaultModelSizes() {
  return LogSpaced<std::int64_t>(1e7, 2e9, 6);
}

std::vector<TokenCount> DefaultTokenSchedule(TokenCount min_tokens,
                                             TokenCount max_tokens) {
  return LogSpaced<TokenCount>(static_cast<double>(min_tokens),
                               static_cast<double>(max_tokens), 12);
}

std::map<Language, TokenCount> SplitTokens(TokenCount total,
                                           const std::map<Language, double>& weights) {
  double sum = 0.0;
  for (const auto& [lang, w] : weights) sum += w;
  std::map<Language, TokenCount> out;
  std::vector<std::pair<double, Language>> remainders;
  TokenCount assigned = 0;
  for (const auto& [lang, w] : weights) {
    if (w <= 0.0) continue;
    const double exact = static_cast<double>(total) * (w / sum);
    const TokenCount base = static_cast<TokenCount>(std::floor(exact));
    out[lang] = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), lang);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total && !remainders.empty(); ++i, ++assigned) {
    ++out[remainders[i % remainders.size()].second];
  }
  return out;
}

RunSet GenerateRuns(const SynthDesign& design, const CorpusCatalog& catalog) {
  design.Validate();
  const auto* truths = std::get_if<std::vector<AtlasTruth>>(&design.law);
  std::vector<AtlasLaw> laws;
  if (truths) {
    for (const auto& t : *truths) laws.emplace_back(t.spec, t.params, catalog);
  }

  std::vector<RunRecord> records;
  std::uint64_t cell = 0;
  for (const auto& mix : design.mixtures) {
    for (const auto n : design.n_values) {
      const std::string run_id = mix.id + "-n" + std::to_string(n);
      for (const auto total : design.token_schedule) {
        RunRecord base;
        base.run_id = run_id;
        base.n_params = n;
        base.mixture_id = mix.id;
        base.sampling_weights = mix.weights;
        base.cumulative_tokens = SplitTokens(total, mix.weights);
        base.total_tokens = total;
        const auto cell_name = [&](const Language& l) {
          return "cell (mixture '" + mix.id + "', N " + std::to_string(n) +
                 ", D " + std::to_string(total) + ", eval '" + l + "')";
        };

        auto emit = [&](const Language& lang, double clean) {
          if (!(clean > 0.0) || !std::isfinite(clean)) {
            throw DataError("synth: law is not evaluable at " + cell_name(lang));
          }
          RunRecord r = base;
          r.eval_language = lang;
          r.loss = clean * Noise(design.noise_sigma, MixSeed(design.seed, cell));
          ++cell;
          records.push_back(std::move(r));
        };

        if (truths) {
          for (const auto& law : laws) {
            const Language& lang = law.spec().target_language;
            if (!base.InMixture(lang)) continue;
            RunRecord probe = base;
            probe.eval_language = lang;
            double clean;
            try {
              clean = law.PredictRun(probe);
            } catch (const std::exception& e) {
              throw DataError("synth: law is not evaluable at " + cell_name(lang) +
                              ": " + e.what());
            }
            emit(lang, clean);
          }
        } else {
          const auto& cap = std::get<CapacityParams>(design.law);
          const auto langs = base.MixtureLanguages();
          const double k = static_cast<double>(langs.size());
          const bool uniform = UniformWeights(mix.weights);
          for (const auto& lang : langs) {
            if (!design.eval_languages.empty() &&
                std::find(design.eval_languages.begin(), design.eval_languages.end(),
                          lang) == design.eval_languages.end()) {
              continue;
            }
            const double d_t = uniform ? static_cast<double>(total) / k
                                       : static_cast<double>(total) * mix.weights.at(lang);
            emit(lang, PredictCapacityLoss(cap, k, static_cast<double>(n), d_t));
          }
        }
      }
    }
  }
  return RunSet(std::move(records));
}

LearningCurve GenerateCurve(std::string regime_id, Language eval_language,
                            const std::function<double(double)>& law,
                            const std::vector<double>& schedule,
                            double noise_sigma, std::uint64_t seed) {
  if (!(noise_sigma >= 0.0)) throw DataError("synth: noise_sigma must be >= 0");
  std::vector<CurvePoint> points;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && !(schedule[i] > schedule[i - 1])) {
      throw DataError("synth: curve schedule must be strictly increasing");
    }
    const double clean = law(schedule[i]);
    if (!(clean > 0.0) || !std::isfinite(clean)) {
      throw DataError("synth: curve law is not evaluable at " +
                      FormatDouble(schedule[i]) + " tokens");
    }
    points.push_back({schedule[i], clean * Noise(noise_sigma, MixSeed(seed, i))});
  }
  return LearningCurve(std::move(regime_id), std::move(eval_language),
                       std::move(points));
}

TransferCurveSet GenerateTransferCurves(const std::vector<Language>& languages,
                                        std::uint64_t seed, double noise_sigma) {
  if (languages.size() < 2) throw DataError("synth: transfer curves need 2+ languages");
  TransferCurveSet out;
  Rng rng(MixSeed(seed, 0x7AF));
  // Latent traits: how much a language gains from others and how much it gives.
  std::map<Language, double> receptive, donor, floor;
  for (const auto& l : languages) {
    if (receptive.count(l)) throw DataError("synth: duplicate language '" + l + "'");
    receptive[l] = rng.Uniform();
    donor[l] = rng.Uniform();
    floor[l] = rng.Uniform(1.5, 2.5);
  }
  std::vector<double> pre_schedule, ft_schedule{0.0};
  for (int i = 0; i < 40; ++i) pre_schedule.push_back(1e9 * std::pow(200.0, i / 39.0));
  for (int i = 0; i < 20; ++i) ft_schedule.push_back(1e7 * std::pow(100.0, i / 19.0));

  std::uint64_t index = 0;
  auto add = [&](std::string id, const Language& t, const std::function<double(double)>& law,
                 const std::vector<double>& schedule) {
    out.curves.push_back(GenerateCurve(std::move(id), t, law, schedule, noise_sigma,
                                       MixSeed(seed, index++)));
  };
  for (const auto& t : languages) {
    const double e = floor[t];
    auto mono = [e](double d) { return e + 300.0 * std::pow(d, -0.3); };
    add("mono", t, mono, pre_schedule);
    for (const auto& s : languages) {
      if (s == t) continue;
      const double bts = -0.4 + 1.2 * donor[s] * receptive[t];
      out.bts[{s, t}] = bts;
      const double k = 1.0 / (2.0 - bts);
      add("bi:" + s, t, [&](double d) { return mono(d * k); }, pre_schedule);
    }
    const double base = mono(1e11) + 0.1;
    add("base", t, [base](double) { return base; }, {0.0, out.d_max});
    for (const auto& s : languages) {
      const double gain =
          s == t ? 0.05 + 0.3 * receptive[t] : 0.02 + 0.2 * donor[s] * receptive[t];
      add("ft:" + s, t,
          [base, gain](double d) { return base - gain * (1.0 - std::exp(-d / 2e8)); },
          ft_schedule);
    }
  }
  return out;
}

std::vector<LearningCurve> GenerateCrossoverCurves(
    const std::vector<std::int64_t>& n_values, const Language& language,
    std::uint64_t seed, double noise_sigma) {
  std::vector<double> schedule;
  for (int i = 0; i < 41; ++i) schedule.push_back(1e8 * std::pow(1e4, i / 40.0));
  std::vector<LearningCurve> curves;
  std::uint64_t index = 0;
  for (const auto n : n_values) {
    if (n <= 0) throw DataError("synth: model sizes must be positive");
    const double floor = 1.7 + std::exp(6.0) * std::pow(static_cast<double>(n), -0.34);
    const double gap = 0.08 * std::pow(static_cast<double>(n) / 1e8, -0.15);
    const double b = std::exp(6.5);
    const std::string suffix = "@" + std::to_string(n);
    curves.push_back(GenerateCurve(
        "pretrain" + suffix, language,
        [&](double d) { return floor + b * std::pow(d, -0.3); }, schedule, noise_sigma,
        MixSeed(seed, index++)));
    curves.push_back(GenerateCurve(
        "finetune" + suffix, language,
        [&](double d) { return floor + gap + b * std::pow(d + 2e10, -0.3); }, schedule,
        noise_sigma, MixSeed(seed, index++)));
  }
  return curves;
}

namespace {

SynthMixture Uniform(std::string id, const std::vector<Language>& langs) {
  SynthMixture m{std::move(id), {}};
  for (const auto& l : langs) m.weights[l] = 1.0 / static_cast<double>(langs.size());
  return m;
}

AtlasTruth FullTruth(Language target, std::vector<Language> transfer,
                     std::vector<double> tau, double tau_other, double lambda) {
  AtlasTruth t;
  t.spec = {LawVariant::kAtlasFull, std::move(target), std::move(transfer)};
  t.params.variant = LawVariant::kAtlasFull;
  t.params.e_irreducible = 1.6;
  t.params.log_a = 6.0;
  t.params.log_b = 6.5;
  t.params.alpha = 0.34;
  t.params.beta = 0.30;
  t.params.lambda = lambda;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    t.params.tau_transfer[t.spec.transfer_set[i]] = tau[i];
  }
  t.params.tau_other = tau_other;
  return t;
}

}  // namespace

std::vector<std::string> SynthPresetNames() {
  return {"recovery", "saturation", "capacity"};
}

SynthPreset MakeSynthPreset(std::string_view name, std::uint64_t seed,
                            double noise_sigma) {
  SynthPreset p;
  SynthDesign& d = p.design;
  d.n_values = DefaultModelSizes();
  d.token_schedule = DefaultTokenSchedule();
  d.noise_sigma = noise_sigma;
  d.seed = seed;

  if (name == "recovery") {
    p.catalog = CorpusCatalog({{"sw", 2'000'000'000},
                               {"en", 500'000'000'000},
                               {"fr", 200'000'000'000},
                               {"de", 200'000'000'000},
                               {"es", 200'000'000'000}});
    d.law = std::vector<AtlasTruth>{FullTruth("sw", {"en", "fr"}, {0.35, 0.2}, 0.05, 1.5)};
    d.mixtures = {
        Uniform("mono-sw", {"sw"}),
        Uniform("bi-sw-en", {"sw", "en"}),
        Uniform("bi-sw-fr", {"sw", "fr"}),
        Uniform("tri-sw-en-fr", {"sw", "en", "fr"}),
        Uniform("quad-sw-en-de-es", {"sw", "en", "de", "es"}),
        {"skew-sw-en-fr-de", {{"sw", 0.1}, {"en", 0.3}, {"fr", 0.3}, {"de", 0.3}}},
        Uniform("bi-sw-de", {"sw", "de"}),
        Uniform("unimax-5", {"sw", "en", "fr", "de", "es"}),
    };
  } else if (name == "saturation") {
    p.catalog = CorpusCatalog({{"sw", 1'000'000'000},
                               {"hi", 2'000'000'000},
                               {"yo", 500'000'000},
                               {"en", 500'000'000'000},
                               {"fr", 200'000'000'000},
                               {"de", 200'000'000'000}});
    d.law = std::vector<AtlasTruth>{
        FullTruth("sw", {"en"}, {0.5}, 0.1, 2.0),
        FullTruth("hi", {"en"}, {0.4}, 0.1, 2.0),
        FullTruth("yo", {"fr"}, {0.5}, 0.1, 2.0),
    };
    d.mixtures = {
        Uniform("mono-sw", {"sw"}),
        Uniform("mono-hi", {"hi"}),
        Uniform("mono-yo", {"yo"}),
        Uniform("bi-sw-en", {"sw", "en"}),
        Uniform("bi-hi-en", {"hi", "en"}),
        Uniform("bi-yo-fr", {"yo", "fr"}),
        Uniform("bi-sw-de", {"sw", "de"}),
        Uniform("bi-hi-fr", {"hi", "fr"}),
        Uniform("bi-yo-de", {"yo", "de"}),
        Uniform("tri-sw-en-fr", {"sw", "en", "fr"}),
        Uniform("tri-hi-yo-en", {"hi", "yo", "en"}),
        Uniform("tri-sw-yo-de", {"sw", "yo", "de"}),
        Uniform("unimax-6", {"sw", "hi", "yo", "en", "fr", "de"}),
    };
  } else if (name == "capacity") {
    const std::vector<Language> langs{"en", "fr", "de", "es", "hi", "sw", "yo", "zh"};
    std::map<Language, TokenCount> u;
    for (const auto& l : langs) u[l] = 1'000'000'000'000;
    p.catalog = CorpusCatalog(u);
    CapacityParams cap;
    cap.l_inf = 1.5;
    cap.log_a = 6.0;
    cap.log_b = 6.5;
    cap.alpha = 0.34;
    cap.beta = 0.30;
    cap.phi = 0.08;
    cap.psi = -0.08;
    d.law = cap;
    for (std::size_t k : {1, 2, 4, 8}) {
      d.mixtures.push_back(Uniform("uniform-" + std::to_string(k),
                                   {langs.begin(), langs.begin() + k}));
    }
  } else {
    throw DataError("unknown synth preset '" + std::string(name) + "'");
  }
  return p;
}

}  // namespace atlas
