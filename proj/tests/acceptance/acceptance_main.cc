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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. argv[1] is a scratch directory for the CLI determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "atlas/capacity.h"
#include "atlas/crossover.h"
#include "atlas/fitter.h"
#include "atlas/forest.h"
#include "atlas/holdout_eval.h"
#include "atlas/laws.h"
#include "atlas/metrics.h"
#include "atlas/random.h"
#include "atlas/synth.h"
#include "atlas/transfer.h"
#include "test_support.h"

#ifdef ATLASKIT_HAVE_CLI
#include "cli.h"
#include "output.h"
#endif

namespace atlas {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double RelErr(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Ground-truth spec and params of each eval language of a preset.
std::map<Language, AtlasTruth> Truths(const SynthPreset& p) {
  std::map<Language, AtlasTruth> out;
  for (const auto& t : std::get<std::vector<AtlasTruth>>(p.design.law)) {
    out[t.spec.target_language] = t;
  }
  return out;
}

Outcome ParameterRecovery() {
  const auto start = Clock::now();
  const SynthPreset p = MakeSynthPreset("recovery", 7, 0.01);
  const RunSet runs = GenerateRuns(p.design, p.catalog);
  const AtlasTruth truth = Truths(p).begin()->second;
  FitConfig config;
  config.seed = 11;
  const auto fit = Fit(runs, truth.spec, p.catalog, config);

  const std::vector<LawSpec> specs{truth.spec};
  SplitSpec split;
  split.axis = SplitAxis::kRandom;
  split.seed = 13;
  const EvalReport report = EvaluateSuite(runs, specs, FittingFactory(p.catalog, config),
                                          std::span<const SplitSpec>(&split, 1));
  const double r2 = report.axes.at(0).r2;
  const double elapsed = Seconds(start);

  const auto& got = fit.params;
  const auto& want = truth.params;
  const bool ok = std::fabs(got.alpha - want.alpha) <= 0.05 &&
                  std::fabs(got.beta - want.beta) <= 0.05 &&
                  RelErr(got.lambda, want.lambda) <= 0.25 && r2 >= 0.99 && elapsed <= 60.0;
  return {ok, Fmt("alpha %.4f (true %.2f) beta %.4f (true %.2f) lambda %.4f (true %.2f) "
                  "R2(random) %.5f, %.1fs",
                  got.alpha, want.alpha, got.beta, want.beta, got.lambda, want.lambda, r2,
                  elapsed)};
}

Outcome OracleSelfConsistency() {
  const SynthPreset p = MakeSynthPreset("saturation", 0, 0.0);
  const RunSet runs = GenerateRuns(p.design, p.catalog);
  std::vector<LawSpec> specs;
  std::map<Language, LawParams> params;
  for (const auto& [lang, t] : Truths(p)) {
    specs.push_back(t.spec);
    params[lang] = t.params;
  }
  std::vector<SplitSpec> splits;
  for (SplitAxis a : {SplitAxis::kRandom, SplitAxis::kN, SplitAxis::kD, SplitAxis::kC,
                      SplitAxis::kM}) {
    SplitSpec s;
    s.axis = a;
    splits.push_back(s);
  }
  const EvalReport report =
      EvaluateSuite(runs, specs, FixedParamsFactory(p.catalog, params), splits);
  double worst = 0.0;
  std::string detail;
  for (const auto& axis : report.axes) {
    worst = std::max(worst, std::fabs(axis.r2 - 1.0));
    detail += Fmt("%s=%.12f ", SplitAxisLabel(axis.axis).c_str(), axis.r2);
  }
  const bool ok = report.axes.size() == 5 && worst <= 1e-9;
  return {ok, detail + Fmt("max |R2-1| %.2e", worst)};
}

// Minimizes log(s) + log(t(s)) on the iso-loss constraint in x = log s.
double GoldenSectionArgmin(const IsoLossCurve& c) {
  const double k = std::pow(c.r, c.phi) * c.weights.w_n;
  const double m = std::pow(c.r, c.psi) * c.weights.w_d;
  auto f = [&](double x) {
    return x + (std::log(m) - std::log1p(-k * std::exp(-c.alpha * x))) / c.beta;
  };
  double lo = std::log(k) / c.alpha + 1e-9, hi = lo + 60.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 400 && hi - lo > 1e-13; ++i) {
    if (f1 <= f2) {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = f(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = f(x2);
    }
  }
  return std::exp(0.5 * (lo + hi));
}

Outcome ClosedFormVsNumerical() {
  Rng rng(3);
  double worst_rel = 0.0, worst_residual = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double alpha = rng.Uniform(0.1, 0.8), beta = rng.Uniform(0.1, 0.8);
    const double phi = rng.Uniform(-0.3, 0.3), psi = rng.Uniform(-0.3, 0.3);
    const double r = testing::LogUniform(rng, 0.25, 16.0);
    const Multipliers m = ComputeOptimalMultipliers(phi, psi, alpha, beta, r);
    const IsoLossCurve c{r, phi, psi, alpha, beta, ComputeOptimalWeights(alpha, beta)};
    const double s = GoldenSectionArgmin(c);
    const double t = c.TGivenS(s);
    worst_rel = std::max({worst_rel, RelErr(m.n_ratio, s), RelErr(m.d_t_ratio, t),
                          RelErr(m.d_tot_ratio, r * t), RelErr(m.c_ratio, r * s * t)});

    worst_residual = std::max(worst_residual, std::fabs(c.Residual(m.n_ratio, m.d_t_ratio)));
    for (int j = 0; j < 10; ++j) {
      const double s_j = c.MinFeasibleS() * testing::LogUniform(rng, 1.0 + 1e-6, 1e3);
      worst_residual = std::max(worst_residual, std::fabs(c.Residual(s_j, c.TGivenS(s_j))));
      const double t_j = c.MinFeasibleT() * testing::LogUniform(rng, 1.0 + 1e-6, 1e3);
      worst_residual = std::max(worst_residual, std::fabs(c.Residual(c.SGivenT(t_j), t_j)));
    }
  }
  return {worst_rel <= 1e-6 && worst_residual <= 1e-9,
          Fmt("max relative gap %.2e, max iso-loss residual %.2e", worst_rel, worst_residual)};
}

Outcome PlannerAnchor() {
  const Multipliers m = MultipliersFromRatios(0.2427, -0.2727, 4.0);
  const bool ok = std::fabs(m.n_ratio - 1.40) <= 0.01 &&
                  std::fabs(m.d_tot_ratio - 2.74) <= 0.01 &&
                  std::fabs(m.c_ratio - 3.84) <= 0.02 &&
                  std::fabs(m.d_t_ratio - 0.685) <= 0.005;
  return {ok, Fmt("N x%.4f, D_tot x%.4f, C x%.4f, D_t x%.4f", m.n_ratio, m.d_tot_ratio,
                  m.c_ratio, m.d_t_ratio)};
}

Outcome BtsExactness() {
  const double d_mono = kDefaultMonoTokens;
  const LearningCurve mono("mono", "sw", {{1e9, 4.0}, {d_mono, 3.0}, {1e13, 2.0}});
  auto bilingual = [&](double factor) {
    return LearningCurve("bi:en", "sw", {{1e9, 4.5}, {factor * d_mono, 3.0}, {1e14, 2.0}});
  };
  const auto at2 = Bts(mono, bilingual(2.0), d_mono);
  const auto at15 = Bts(mono, bilingual(1.5), d_mono);
  const auto at3 = Bts(mono, bilingual(3.0), d_mono);
  const bool ok = at2 && at15 && at3 && *at2 == 0.0 && std::fabs(*at15 - 0.5) <= 1e-12 &&
                  std::fabs(*at3 + 1.0) <= 1e-12;
  return {ok, Fmt("2x %.17g, 1.5x %.17g, 3x %.17g", at2.value_or(NAN), at15.value_or(NAN),
                  at3.value_or(NAN))};
}

Outcome SaturationSmoothness() {
  Rng rng(6);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double u = testing::LogUniform(rng, 1e6, 1e12);
    const double lambda = testing::LogUniform(rng, 0.05, 10.0);
    const double h = 1e-8 * u;
    const double left = (Saturation(u, u, lambda) - Saturation(u - h, u, lambda)) / h;
    const double right = (Saturation(u + h, u, lambda) - Saturation(u, u, lambda)) / h;
    worst = std::max({worst, std::fabs(left - 1.0), std::fabs(right - 1.0)});
  }
  return {worst <= 1e-6, Fmt("max |slope - 1| %.2e over 1000 draws", worst)};
}

Outcome ForestCrossValidation() {
  const auto start = Clock::now();
  Rng rng(8);
  FeatureMatrix x(4);
  std::vector<double> y;
  for (int i = 0; i < 400; ++i) {
    const std::vector<double> row{rng.Uniform(), rng.Uniform(), rng.Uniform(), rng.Uniform()};
    x.AddRow(row);
    y.push_back(2.0 * std::sin(3.0 * row[0]) + 1.5 * row[1] * row[1] + row[2] - 0.5 * row[3] +
                0.1 * rng.Normal());
  }
  ForestConfig config;
  config.seed = 9;
  const auto cv = CrossValidate(x, y, 5, 10, config);
  const double elapsed = Seconds(start);
  return {cv.r2 >= 0.8 && cv.spearman >= 0.8 && elapsed <= 30.0,
          Fmt("R2 %.4f, Spearman %.4f, %.1fs", cv.r2, cv.spearman, elapsed)};
}

Outcome CrossoverRecovery() {
  // Loss difference linear in log10 tokens, zero at 1e11, on a grid where
  // 1e11 falls inside a segment.
  std::vector<CurvePoint> pre, ft;
  std::vector<double> grid;
  for (int i = 0; i < 37; ++i) grid.push_back(std::pow(10.0, 8.0 + i * (4.0 / 36.0)));
  for (double d : grid) {
    const double x = std::log10(d);
    pre.push_back({d, 5.0 - 0.2 * x});
    ft.push_back({d, 5.0 - 0.2 * x + 0.05 * (x - 11.0)});
  }
  const LearningCurve pretrain("pretrain@1e9", "sw", pre);
  const LearningCurve finetune("finetune@1e9", "sw", ft);
  const auto found = CrossoverTokens(pretrain, finetune);
  const double segment = std::log(grid[1] / grid[0]);
  const double gap = found ? std::fabs(std::log(*found / 1e11)) : INFINITY;

  const double a = 3.0, b = 1.65;
  std::vector<CrossoverPoint> points;
  for (double n : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    points.push_back({n, std::exp(a * std::pow(n, b))});
  }
  const CrossoverFit fit = FitCrossoverLaw(points);
  const bool ok = gap <= segment && RelErr(fit.coeff, a) <= 1e-6 &&
                  std::fabs(fit.exponent - b) <= 1e-6;
  return {ok, Fmt("crossing %.6g (|log gap| %.2e, segment %.3f); a %.9f b %.9f",
                  found.value_or(NAN), gap, segment, fit.coeff, fit.exponent)};
}

#ifdef ATLASKIT_HAVE_CLI
int RunCli(const std::vector<std::string>& args, std::string* err) {
  std::vector<const char*> argv{"atlaskit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, e;
  const int code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, e);
  if (err) *err = e.str();
  return code;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every file except the timestamp sidecar.
std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name != cli::kMetaSidecar) files[name] = Slurp(e.path());
  }
  return files;
}

Outcome CliDeterminism(const fs::path& scratch) {
  const auto s = [&](const std::string& name) { return (scratch / name).string(); };
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  // Inputs are produced once; each step below is then run twice.
  struct Step {
    std::string name;
    std::vector<std::string> args;
    std::function<void()> prepare;
  };
  const std::vector<Step> steps{
      {"synth-recovery", {"synth", "--preset", "recovery", "--seed", "1", "--format", "csv"}},
      {"synth-saturation", {"synth", "--preset", "saturation", "--seed", "2"}},
      {"synth-capacity", {"synth", "--preset", "capacity", "--seed", "3"}},
      {"synth-transfer",
       {"synth", "--preset", "transfer", "--languages", "a,b,c,d,e,f", "--seed", "4"}},
      {"synth-crossover", {"synth", "--preset", "crossover", "--seed", "5"}},
      {"fit",
       {"fit", "--runs", s("synth-recovery/runs.csv"), "--catalog",
        s("synth-recovery/catalog.csv"), "--law", "atlas_full", "--seed", "6",
        "--emit-plot-data"}},
      {"fit-capacity", {"fit", "--capacity", "--runs", s("synth-capacity/runs.jsonl")}},
      {"eval",
       {"eval", "--runs", s("synth-saturation/runs.jsonl"), "--catalog",
        s("synth-saturation/catalog.csv"), "--law", "atlas_target", "--axes", "random,n",
        "--seed", "7", "--emit-plot-data"}},
      {"transfer",
       {"transfer", "--curves", s("synth-transfer/curves.jsonl"), "--trees", "60", "--seed", "8",
        "--emit-plot-data"}},
      {"transfer-partial",
       {"transfer", "--curves", s("partial.jsonl"), "--trees", "60", "--cv", "3", "--seed",
        "8"},
       [&] {
         // Without the bilingual curves of source "f" its row is estimated.
         std::ifstream in(s("synth-transfer/curves.jsonl"));
         auto curves = ParseCurves(in, TableFormat::kJsonl);
         std::erase_if(curves, [](const LearningCurve& c) { return c.regime_id() == "bi:f"; });
         std::ofstream out(s("partial.jsonl"));
         WriteCurves(out, curves, TableFormat::kJsonl);
       }},
      {"crossover",
       {"crossover", "--curves", s("synth-crossover/curves.jsonl"), "--budget", "1e21",
        "--n-params", "1e9", "--emit-plot-data"}},
      {"plan",
       {"plan", "--params", s("fit-capacity/capacity_fit.json"), "--r", "4",
        "--emit-plot-data"}},
  };
  std::string detail;
  bool ok = true;
  for (const auto& step : steps) {
    if (step.prepare) step.prepare();
    std::vector<std::string> args = step.args;
    args.push_back("--out");
    args.push_back(s(step.name));
    std::string err;
    std::map<std::string, std::string> first;
    for (int round = 0; round < 2; ++round) {
      const int code = RunCli(args, &err);
      if (code != cli::kExitOk) {
        return {false, step.name + " exited " + std::to_string(code) + ": " + err};
      }
      const auto snap = Snapshot(s(step.name));
      if (round == 0) {
        first = snap;
      } else if (snap != first) {
        ok = false;
        detail += step.name + " differs; ";
      }
    }
    detail += step.name + "(" + std::to_string(first.size()) + " files) ";
  }
  return {ok, detail};
}
#endif

Outcome DirectionalOrdering() {
  const SynthPreset p = MakeSynthPreset("saturation", 0, 0.01);
  const RunSet runs = GenerateRuns(p.design, p.catalog);
  std::vector<LawSpec> full, bsl;
  for (const auto& [lang, t] : Truths(p)) {
    full.push_back(t.spec);
    bsl.push_back({LawVariant::kBsl, lang, {}});
  }
  std::vector<SplitSpec> splits(2);
  splits[0].axis = SplitAxis::kN;
  splits[1].axis = SplitAxis::kM;
  FitConfig config;
  config.seed = 12;
  const auto factory = FittingFactory(p.catalog, config);
  const EvalReport a = EvaluateSuite(runs, full, factory, splits);
  const EvalReport b = EvaluateSuite(runs, bsl, factory, splits);
  const double a_n = a.Find(SplitAxis::kN)->r2, a_m = a.Find(SplitAxis::kM)->r2;
  const double b_n = b.Find(SplitAxis::kN)->r2, b_m = b.Find(SplitAxis::kM)->r2;
  return {a_n > b_n && a_m > b_m,
          Fmt("R2(N) atlas_full %.4f vs bsl %.4f; R2(M) atlas_full %.4f vs bsl %.4f", a_n, b_n,
              a_m, b_m)};
}

}  // namespace
}  // namespace atlas

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path scratch =
      argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "atlaskit_acceptance";

  using Check = std::function<atlas::Outcome()>;
  const std::vector<std::pair<const char*, Check>> checks{
      {"AC1 parameter recovery", atlas::ParameterRecovery},
      {"AC2 oracle self-consistency", atlas::OracleSelfConsistency},
      {"AC3 closed form vs numerical optimum", atlas::ClosedFormVsNumerical},
      {"AC4 fourfold planner anchor", atlas::PlannerAnchor},
      {"AC5 BTS exactness", atlas::BtsExactness},
      {"AC6 saturation slope continuity", atlas::SaturationSmoothness},
      {"AC7 forest cross-validation", atlas::ForestCrossValidation},
      {"AC8 crossover detection and fit", atlas::CrossoverRecovery},
#ifdef ATLASKIT_HAVE_CLI
      {"AC9 CLI determinism", [&] { return atlas::CliDeterminism(scratch); }},
#else
      {"AC9 CLI determinism",
       [] { return atlas::Outcome{false, "command-line tool not built"}; }},
#endif
      {"AC10 atlas_full beats bsl on R2(N) and R2(M)", atlas::DirectionalOrdering},
  };

  int failures = 0;
  for (const auto& [name, check] : checks) {
    atlas::Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
