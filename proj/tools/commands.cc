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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "atlas/capacity.h"
#include "atlas/crossover.h"
#include "atlas/error.h"
#include "atlas/fitter.h"
#include "atlas/forest.h"
#include "atlas/holdout_eval.h"
#include "atlas/laws.h"
#include "atlas/run_data.h"
#include "atlas/synth.h"
#include "atlas/table_io.h"
#include "atlas/transfer.h"

namespace atlas::cli {
namespace {

// Curve regime ids understood by the transfer and crossover commands.
constexpr const char* kMonoRegime = "mono";
constexpr const char* kBaseRegime = "base";
constexpr const char* kBilingualPrefix = "bi:";
constexpr const char* kFinetunePrefix = "ft:";
constexpr const char* kPretrainPrefix = "pretrain@";
constexpr const char* kCrossFinetunePrefix = "finetune@";

TableFormat FormatFromPath(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") return TableFormat::kCsv;
  if (ext == ".jsonl" || ext == ".json") return TableFormat::kJsonl;
  throw UsageError("cannot infer the table format of '" + path +
                   "'; use a .csv or .jsonl extension");
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

template <typename F>
auto WithFile(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

RunSet LoadRuns(const std::string& path) {
  const auto fmt = FormatFromPath(path);
  auto in = OpenInput(path);
  return WithFile(path, [&] { return ParseRuns(in, fmt); });
}

CorpusCatalog LoadCatalog(const std::string& path) {
  const auto fmt = FormatFromPath(path);
  auto in = OpenInput(path);
  return WithFile(path, [&] { return ParseCatalog(in, fmt); });
}

std::vector<LearningCurve> LoadCurves(const std::string& path) {
  const auto fmt = FormatFromPath(path);
  auto in = OpenInput(path);
  return WithFile(path, [&] { return ParseCurves(in, fmt); });
}

Json LoadJson(const std::string& path) {
  auto in = OpenInput(path);
  return WithFile(path, [&] { return Json::parse(in); });
}

Json Report(const std::string& kind) {
  return {{"schema_version", kSchemaVersion}, {"kind", kind}};
}

Json CommonJson(const std::string& subcommand, const CommonOptions& c) {
  return {{"subcommand", subcommand}, {"seed", c.seed}, {"emit_plot_data", c.emit_plot_data}};
}

Json LawSelectionJson(const LawSelection& l) {
  return {{"law", l.law},
          {"targets", l.targets},
          {"transfer_set", l.transfer_set},
          {"transfer_k", l.transfer_k},
          {"grid_starts", l.grid_starts},
          {"random_starts", l.random_starts},
          {"huber_delta", l.huber_delta}};
}

Json OptionalJson(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

FitConfig MakeFitConfig(const LawSelection& l, std::uint64_t seed) {
  FitConfig cfg;
  cfg.seed = seed;
  cfg.n_grid_starts = l.grid_starts;
  cfg.n_random_starts = l.random_starts;
  cfg.huber_delta = l.huber_delta;
  try {
    cfg.Validate();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

LawVariant ParseVariantFlag(const std::string& name) {
  try {
    return ParseLawVariant(name);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::vector<LawSpec> BuildSpecs(const RunSet& runs, const LawSelection& sel) {
  const LawVariant variant = ParseVariantFlag(sel.law);
  const std::vector<Language> targets =
      sel.targets.empty() ? runs.EvalLanguages() : sel.targets;
  if (targets.empty()) throw DataError("no eval languages in the runs table");
  std::vector<LawSpec> specs;
  for (const auto& t : targets) {
    LawSpec spec{variant, t, {}};
    if (variant == LawVariant::kAtlasFull) {
      if (sel.transfer_set.empty()) {
        spec.transfer_set = SelectTransferSet(runs, t, sel.transfer_k);
      } else {
        for (const auto& l : sel.transfer_set) {
          if (l != t) spec.transfer_set.push_back(l);
        }
      }
      if (spec.transfer_set.empty()) {
        throw DataError("no transfer languages co-sampled with '" + t +
                        "'; pass --transfer-set or use another law");
      }
    }
    spec.Validate();
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------- fit

void FitCapacityLaw(const FitOptions& o, OutputDir& dir, std::ostream& out) {
  const RunSet runs = LoadRuns(o.runs);
  if (o.law.targets.size() > 1) {
    throw UsageError("--capacity takes at most one --target");
  }
  std::optional<Language> target;
  if (!o.law.targets.empty()) target = o.law.targets.front();
  const auto obs = CapacityObservations(runs, target);
  const auto fit = FitCapacity(obs, MakeFitConfig(o.law, o.common.seed));
  Json report = ToJson(fit);
  report["observations"] = obs.size();
  report["config"] = ConfigJson(o);
  dir.WriteJson("capacity_fit.json", report);
  const auto& p = fit.params;
  out << "capacity law on " << obs.size() << " observations: alpha " << Fixed(p.alpha)
      << ", beta " << Fixed(p.beta) << ", phi " << Fixed(p.phi) << ", psi "
      << Fixed(p.psi) << ", train R2 " << Fixed(fit.train_r2) << '\n';
}

}  // namespace

Json ConfigJson(const FitOptions& o) {
  Json j = CommonJson("fit", o.common);
  j["runs"] = o.runs;
  j["catalog"] = o.catalog;
  j.update(LawSelectionJson(o.law));
  j["capacity"] = o.capacity;
  return j;
}

void RunFit(const FitOptions& o, OutputDir& dir, std::ostream& out) {
  if (o.capacity) {
    FitCapacityLaw(o, dir, out);
    return;
  }
  if (o.catalog.empty()) throw UsageError("fit needs --catalog");
  const RunSet runs = LoadRuns(o.runs);
  const CorpusCatalog catalog = LoadCatalog(o.catalog);
  const FitConfig cfg = MakeFitConfig(o.law, o.common.seed);
  std::vector<FittedLaw> laws;
  for (const auto& spec : BuildSpecs(runs, o.law)) {
    try {
      laws.push_back({spec, Fit(runs, spec, catalog, cfg)});
    } catch (const std::exception& e) {
      throw DataError("fitting '" + spec.target_language + "': " + e.what());
    }
    const auto& f = laws.back().fit;
    out << spec.target_language << ' ' << LawVariantName(spec.variant) << ": E "
        << Fixed(f.params.e_irreducible) << ", alpha " << Fixed(f.params.alpha)
        << ", beta " << Fixed(f.params.beta);
    if (UsesSaturation(spec.variant)) out << ", lambda " << Fixed(f.params.lambda);
    out << ", train R2 " << (std::isfinite(f.train_r2) ? Fixed(f.train_r2) : "n/a") << '\n';
  }
  Json report = LawSetToJson(laws);
  report["config"] = ConfigJson(o);
  dir.WriteJson("fit.json", report);

  if (o.common.emit_plot_data) {
    auto f = dir.Open("plot_scaling_trajectories.csv");
    WriteCsvRecord(f, {"target", "run_id", "mixture_id", "n_params", "total_tokens",
                       "observed_loss", "predicted_loss"});
    for (const auto& law : laws) {
      const AtlasLaw model(law.spec, law.fit.params, catalog);
      for (std::size_t i : UsableRunIndices(runs, law.spec)) {
        const auto& r = runs[i];
        WriteCsvRecord(f, {law.spec.target_language, r.run_id, r.mixture_id,
                           std::to_string(r.n_params), std::to_string(r.total_tokens),
                           FormatDouble(r.loss), FormatDouble(model.PredictRun(r))});
      }
    }
  }
}

// ---------------------------------------------------------------- eval

Json ConfigJson(const EvalOptions& o) {
  Json j = CommonJson("eval", o.common);
  j["runs"] = o.runs;
  j["catalog"] = o.catalog;
  j.update(LawSelectionJson(o.law));
  j["params"] = o.params;
  j["axes"] = o.axes;
  j["fraction"] = o.fraction;
  j["held_scales"] = o.held_scales;
  j["held_mixtures"] = o.held_mixtures;
  j["averaging"] = o.averaging;
  return j;
}

void Validate(const EvalOptions& o) {
  if (o.axes.empty()) throw UsageError("--axes is empty");
  for (const auto& a : o.axes) {
    try {
      ParseSplitAxis(a);
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  }
  if (o.averaging != "per_language" && o.averaging != "pooled") {
    throw UsageError("--averaging must be per_language or pooled");
  }
  for (double s : o.held_scales) {
    if (!(s > 0.0) || s != std::floor(s)) {
      throw UsageError("--held-scales must be positive integers");
    }
  }
  ParseVariantFlag(o.law.law);
}

void RunEval(const EvalOptions& o, OutputDir& dir, std::ostream& out) {
  const RunSet runs = LoadRuns(o.runs);
  const CorpusCatalog catalog = LoadCatalog(o.catalog);

  std::vector<LawSpec> specs;
  ModelFactory factory;
  if (!o.params.empty()) {
    const auto truths = WithFile(o.params, [&] { return LawSetFromJson(LoadJson(o.params)); });
    std::map<Language, LawParams> params;
    for (const auto& t : truths) {
      if (!o.law.targets.empty() &&
          std::find(o.law.targets.begin(), o.law.targets.end(), t.spec.target_language) ==
              o.law.targets.end()) {
        continue;
      }
      specs.push_back(t.spec);
      params[t.spec.target_language] = t.params;
    }
    if (specs.empty()) throw DataError(o.params + ": no laws for the requested targets");
    factory = FixedParamsFactory(catalog, std::move(params));
  } else {
    specs = BuildSpecs(runs, o.law);
    factory = FittingFactory(catalog, MakeFitConfig(o.law, o.common.seed));
  }

  std::vector<SplitSpec> splits;
  for (const auto& name : o.axes) {
    SplitSpec s;
    s.axis = ParseSplitAxis(name);
    s.fraction = o.fraction;
    s.seed = o.common.seed;
    if (s.axis == SplitAxis::kN) {
      for (double v : o.held_scales) s.held_scales.push_back(std::llround(v));
    }
    if (s.axis == SplitAxis::kM) s.held_mixtures = o.held_mixtures;
    splits.push_back(std::move(s));
  }
  const Averaging averaging =
      o.averaging == "pooled" ? Averaging::kPooled : Averaging::kPerLanguage;
  const EvalReport report = EvaluateSuite(runs, specs, factory, splits, averaging);

  Json j = ToJson(report);
  j["config"] = ConfigJson(o);
  dir.WriteJson("eval.json", j);
  const std::string table = FormatEvalTable(report);
  dir.WriteText("eval.txt", table);
  out << table;
  for (const auto& a : report.axes) {
    for (const auto& [lang, why] : a.skipped) {
      out << "note: axis " << SplitAxisName(a.axis) << " skipped '" << lang << "': " << why
          << '\n';
    }
  }

  if (o.common.emit_plot_data) {
    auto f = dir.Open("plot_eval_axes.csv");
    WriteCsvRecord(f, {"axis", "language", "r2", "n_train", "n_test"});
    for (const auto& a : report.axes) {
      for (const auto& [lang, s] : a.per_language) {
        WriteCsvRecord(f, {std::string(SplitAxisName(a.axis)), lang, FormatDouble(s.r2),
                           std::to_string(s.n_train), std::to_string(s.n_test)});
      }
    }
  }
}

// ---------------------------------------------------------------- transfer

Json ConfigJson(const TransferOptions& o) {
  Json j = CommonJson("transfer", o.common);
  j["curves"] = o.curves;
  j["languages"] = o.languages;
  j["d_mono"] = o.d_mono;
  j["d_max"] = OptionalJson(o.d_max);
  j["trees"] = o.trees;
  j["cv_folds"] = o.cv_folds;
  return j;
}

void RunTransfer(const TransferOptions& o, OutputDir& dir, std::ostream& out) {
  if (!(o.d_mono > 0.0)) throw UsageError("--d-mono must be positive");
  if (o.d_max && !(*o.d_max > 0.0)) throw UsageError("--d-max must be positive");
  if (o.trees == 0) throw UsageError("--trees must be positive");
  const auto curves = LoadCurves(o.curves);
  std::map<std::pair<std::string, Language>, const LearningCurve*> index;
  std::vector<Language> seen;
  for (const auto& c : curves) {
    index[{c.regime_id(), c.eval_language()}] = &c;
    if (std::find(seen.begin(), seen.end(), c.eval_language()) == seen.end()) {
      seen.push_back(c.eval_language());
    }
  }
  const std::vector<Language> langs = o.languages.empty() ? seen : o.languages;
  if (langs.size() < 2) throw DataError("transfer needs at least 2 languages");
  auto find = [&](const std::string& regime, const Language& l) -> const LearningCurve* {
    auto it = index.find({regime, l});
    return it == index.end() ? nullptr : it->second;
  };

  std::map<LanguagePair, double> measured;
  Json measured_json = Json::array();
  Json unreached = Json::array();
  for (const auto& t : langs) {
    const LearningCurve* mono = find(kMonoRegime, t);
    if (mono == nullptr) continue;
    const double target = LossAt(*mono, o.d_mono);
    for (const auto& s : langs) {
      if (s == t) continue;
      const LearningCurve* bi = find(kBilingualPrefix + s, t);
      if (bi == nullptr) continue;
      const auto d_bi = TokensToReach(*bi, target);
      if (!d_bi) {
        unreached.push_back({{"source", s}, {"target", t}});
        continue;
      }
      const double bts = BtsFromTokens(*d_bi, o.d_mono);
      measured[{s, t}] = bts;
      measured_json.push_back({{"source", s}, {"target", t}, {"bts", bts}, {"d_bi", *d_bi}});
    }
  }

  CurveBank bank;
  bank.languages = langs;
  bool any_bank_curve = false;
  double d_max = o.d_max.value_or(0.0);
  for (const auto& t : langs) {
    if (const auto* base = find(kBaseRegime, t)) {
      bank.baselines[t] = base->points().back().loss;
      any_bank_curve = true;
    }
    for (const auto& s : langs) {
      if (const auto* ft = find(kFinetunePrefix + s, t)) {
        bank.finetune.emplace(LanguagePair{s, t}, *ft);
        any_bank_curve = true;
        if (!o.d_max) {
          d_max = d_max == 0.0 ? ft->last_tokens() : std::min(d_max, ft->last_tokens());
        }
      }
    }
  }
  ForestConfig forest;
  forest.n_trees = o.trees;
  forest.seed = o.common.seed;
  const TransferMatrix m = BuildTransferMatrix(measured, langs, any_bank_curve ? &bank : nullptr,
                                               d_max, forest);

  Json report = Report("transfer_report");
  report["languages"] = langs;
  report["d_mono"] = o.d_mono;
  report["d_max"] = any_bank_curve ? Json(d_max) : Json(nullptr);
  report["measured"] = measured_json;
  report["unreached"] = unreached;
  Json scores = Json::array();
  for (const auto& row : m.scores) {
    Json r = Json::array();
    for (double v : row) r.push_back(NumberOrNull(v));
    scores.push_back(r);
  }
  report["scores"] = scores;
  const Json prov = TransferProvenanceJson(m);
  report["provenance"] = prov["provenance"];
  report["forest"] = prov["forest"];

  Json cv = nullptr;
  Json gains = nullptr;
  if (m.forest_seed) {
    const FeatureSet features = BuildFeatures(bank, d_max);
    gains = Json::object();
    for (const auto& l : langs) gains[l] = features.gain.at(l);
    if (o.cv_folds > 0) {
      FeatureMatrix x(4);
      std::vector<double> y;
      for (const auto& pf : features.pairs) {
        auto it = measured.find({pf.source, pf.target});
        if (it == measured.end()) continue;
        x.AddRow(pf.x);
        y.push_back(it->second);
      }
      const auto res = CrossValidate(x, y, o.cv_folds, o.common.seed, forest);
      cv = {{"folds", o.cv_folds}, {"r2", NumberOrNull(res.r2)},
            {"spearman", NumberOrNull(res.spearman)}};
      out << o.cv_folds << "-fold CV on measured pairs: R2 " << Fixed(res.r2)
          << ", Spearman " << Fixed(res.spearman) << '\n';
    }
  } else if (o.cv_folds > 0) {
    throw UsageError("--cv needs finetuning curves and unmeasured pairs to train a forest");
  }
  report["adaptation_gain"] = gains;
  report["cross_validation"] = cv;
  report["config"] = ConfigJson(o);
  dir.WriteJson("transfer.json", report);
  {
    auto f = dir.Open("transfer_matrix.csv");
    WriteTransferMatrixCsv(f, m);
  }
  std::size_t estimated = 0;
  for (const auto& row : m.provenance) {
    estimated += std::count(row.begin(), row.end(), CellProvenance::kEstimated);
  }
  out << langs.size() << " languages: " << measured.size() << " measured, " << estimated
      << " estimated, " << unreached.size() << " unreached pairs\n";

  if (o.common.emit_plot_data) {
    auto f = dir.Open("plot_transfer_heatmap.csv");
    WriteCsvRecord(f, {"source", "target", "score", "provenance"});
    for (std::size_t s = 0; s < langs.size(); ++s) {
      for (std::size_t t = 0; t < langs.size(); ++t) {
        if (s == t) continue;
        WriteCsvRecord(f, {langs[s], langs[t], FormatDouble(m.scores[s][t]),
                           CellProvenanceName(m.provenance[s][t])});
      }
    }
  }
}

// ---------------------------------------------------------------- plan

Json ConfigJson(const PlanOptions& o) {
  Json j = CommonJson("plan", o.common);
  j["params"] = o.params;
  j["r"] = o.r;
  j["phi_alpha"] = OptionalJson(o.phi_alpha);
  j["psi_beta"] = OptionalJson(o.psi_beta);
  j["alpha"] = OptionalJson(o.alpha);
  j["beta"] = OptionalJson(o.beta);
  j["phi"] = OptionalJson(o.phi);
  j["psi"] = OptionalJson(o.psi);
  j["baseline_k"] = OptionalJson(o.baseline_k);
  j["baseline_n"] = OptionalJson(o.baseline_n);
  j["baseline_d"] = OptionalJson(o.baseline_d);
  j["sweep"] = o.sweep;
  return j;
}

void Validate(const PlanOptions& o) {
  if (!(o.r > 0.0)) throw UsageError("--r must be positive");
  const bool ratios = o.phi_alpha || o.psi_beta;
  const bool exponents = o.alpha || o.beta || o.phi || o.psi;
  const bool file = !o.params.empty();
  if (int(ratios) + int(exponents) + int(file) != 1) {
    throw UsageError(
        "give exactly one of --params, --phi-alpha/--psi-beta, or --alpha/--beta/--phi/--psi");
  }
  if (ratios && !(o.phi_alpha && o.psi_beta)) {
    throw UsageError("--phi-alpha and --psi-beta go together");
  }
  if (exponents && !(o.alpha && o.beta && o.phi && o.psi)) {
    throw UsageError("--alpha, --beta, --phi and --psi go together");
  }
  const int baseline = int(bool(o.baseline_k)) + int(bool(o.baseline_n)) + int(bool(o.baseline_d));
  if (baseline != 0 && baseline != 3) {
    throw UsageError("--baseline-k, --baseline-n and --baseline-d go together");
  }
  if (baseline == 3 && !file) {
    throw UsageError("an explicit baseline needs full law parameters from --params");
  }
  if (ratios && !o.sweep.empty()) {
    throw UsageError("--sweep needs exponents or --params, not ratios alone");
  }
}

void RunPlan(const PlanOptions& o, OutputDir& dir, std::ostream& out) {
  Json report;
  Multipliers opt;
  std::vector<FrontierPoint> frontier;
  if (o.phi_alpha) {
    opt = MultipliersFromRatios(*o.phi_alpha, *o.psi_beta, o.r);
    report = Report("plan_report");
    report["r"] = o.r;
    report["weights"] = nullptr;
    report["optimum"] = {{"n_ratio", opt.n_ratio},
                         {"d_t_ratio", opt.d_t_ratio},
                         {"d_tot_ratio", opt.d_tot_ratio},
                         {"c_ratio", opt.c_ratio}};
    report["frontier"] = Json::array();
  } else {
    CapacityParams p;
    if (!o.params.empty()) {
      p = WithFile(o.params, [&] {
        const Json j = LoadJson(o.params);
        return CapacityParamsFromJson(j.contains("kind") && j["kind"] == "capacity_fit"
                                          ? j.at("params")
                                          : j);
      });
    } else {
      p.alpha = *o.alpha;
      p.beta = *o.beta;
      p.phi = *o.phi;
      p.psi = *o.psi;
    }
    PlanQuery q;
    q.r = o.r;
    q.sweep = o.sweep;
    if (o.baseline_k) q.baseline = CapacityBaseline{*o.baseline_k, *o.baseline_n, *o.baseline_d};
    const PlanReport plan = Plan(p, q);
    opt = plan.optimum;
    frontier = plan.frontier;
    report = ToJson(plan);
  }
  report["config"] = ConfigJson(o);
  dir.WriteJson("plan.json", report);
  out << "r = " << FormatDouble(o.r) << ": N x" << Fixed(opt.n_ratio) << ", D_t x"
      << Fixed(opt.d_t_ratio) << ", D_tot x" << Fixed(opt.d_tot_ratio) << ", C x"
      << Fixed(opt.c_ratio) << '\n';

  if (o.common.emit_plot_data && !frontier.empty()) {
    auto f = dir.Open("plot_isoloss_frontier.csv");
    WriteCsvRecord(f, {"s", "t", "d_tot_ratio", "c_ratio"});
    for (const auto& p : frontier) {
      WriteCsvRecord(f, {FormatDouble(p.s), FormatDouble(p.t), FormatDouble(p.d_tot_ratio),
                         FormatDouble(p.c_ratio)});
    }
  }
}

// ---------------------------------------------------------------- crossover

Json ConfigJson(const CrossoverOptions& o) {
  Json j = CommonJson("crossover", o.common);
  j["curves"] = o.curves;
  j["target"] = o.target;
  j["budget"] = OptionalJson(o.budget);
  j["n_params"] = OptionalJson(o.n_params);
  return j;
}

void Validate(const CrossoverOptions& o) {
  if (bool(o.budget) != bool(o.n_params)) {
    throw UsageError("--budget and --n-params go together");
  }
  if (o.budget && !(*o.budget > 0.0 && *o.n_params > 0.0)) {
    throw UsageError("--budget and --n-params must be positive");
  }
}

void RunCrossover(const CrossoverOptions& o, OutputDir& dir, std::ostream& out) {
  const auto curves = LoadCurves(o.curves);
  std::set<Language> langs;
  for (const auto& c : curves) langs.insert(c.eval_language());
  Language lang = o.target;
  if (lang.empty()) {
    if (langs.size() != 1) {
      throw UsageError("curves cover several languages; pick one with --target");
    }
    lang = *langs.begin();
  }

  // Model size -> (pretrain, finetune), ordered by size.
  std::map<double, std::pair<const LearningCurve*, const LearningCurve*>> by_size;
  for (const auto& c : curves) {
    if (c.eval_language() != lang) continue;
    const std::string& id = c.regime_id();
    const bool pre = id.rfind(kPretrainPrefix, 0) == 0;
    const bool ft = id.rfind(kCrossFinetunePrefix, 0) == 0;
    if (!pre && !ft) {
      throw DataError("regime '" + id + "' is neither pretrain@<N> nor finetune@<N>");
    }
    const std::string size = id.substr(id.find('@') + 1);
    double n = 0.0;
    try {
      n = ParseDouble(size);
    } catch (const std::invalid_argument&) {
      throw DataError("regime '" + id + "': bad model size '" + size + "'");
    }
    if (!(n > 0.0)) throw DataError("regime '" + id + "': model size must be positive");
    (pre ? by_size[n].first : by_size[n].second) = &c;
  }
  if (by_size.empty()) throw DataError("no crossover curves for '" + lang + "'");

  std::vector<CrossoverPoint> points;
  Json point_json = Json::array();
  for (const auto& [n, pair] : by_size) {
    if (!pair.first || !pair.second) {
      throw DataError("model size " + FormatDouble(n) + " needs both pretrain@ and finetune@ curves");
    }
    const auto tokens = CrossoverTokens(*pair.first, *pair.second);
    Json p{{"n_params", n}, {"tokens", nullptr}, {"compute", nullptr}};
    if (tokens) {
      const double c = TrainingCompute(n, *tokens);
      points.push_back({n, c});
      p["tokens"] = *tokens;
      p["compute"] = c;
      out << "N " << FormatDouble(n) << ": crossover at " << FormatDouble(*tokens)
          << " tokens (C " << FormatDouble(c) << ")\n";
    } else {
      out << "N " << FormatDouble(n) << ": no crossover in the shared token range\n";
    }
    point_json.push_back(p);
  }

  Json report = Report("crossover_report");
  report["language"] = lang;
  report["points"] = point_json;
  std::optional<CrossoverFit> fit;
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.n_params);
  if (distinct.size() >= 2) {
    fit = FitCrossoverLaw(points);
    report["fit"] = ToJson(*fit);
    out << "log C* = " << FormatDouble(fit->coeff) << " * N^" << FormatDouble(fit->exponent)
        << '\n';
  } else {
    report["fit"] = nullptr;
  }
  if (o.budget) {
    if (!fit) throw DataError("a decision needs crossovers at 2 or more model sizes");
    const Regime r = Decide(*fit, *o.n_params, *o.budget);
    report["decision"] = {{"n_params", *o.n_params},
                          {"budget", *o.budget},
                          {"log_budget", std::log(*o.budget)},
                          {"threshold_log_compute", CrossoverLogCompute(*fit, *o.n_params)},
                          {"regime", RegimeName(r)}};
    out << "decision: " << RegimeName(r) << '\n';
  } else {
    report["decision"] = nullptr;
  }
  report["config"] = ConfigJson(o);
  dir.WriteJson("crossover.json", report);

  if (o.common.emit_plot_data) {
    auto f = dir.Open("plot_crossover_curves.csv");
    WriteCsvRecord(f, {"regime", "n_params", "tokens", "loss"});
    for (const auto& [n, pair] : by_size) {
      for (const auto* c : {pair.first, pair.second}) {
        const std::string regime = c == pair.first ? "pretrain" : "finetune";
        for (const auto& p : c->points()) {
          WriteCsvRecord(f, {regime, FormatDouble(n), FormatDouble(p.tokens),
                             FormatDouble(p.loss)});
        }
      }
    }
  }
}

// ---------------------------------------------------------------- synth

Json ConfigJson(const SynthOptions& o) {
  Json j = CommonJson("synth", o.common);
  j["preset"] = o.preset;
  j["noise"] = o.noise;
  j["format"] = o.format;
  j["languages"] = o.languages;
  j["n_values"] = o.n_values;
  j["target"] = o.target;
  return j;
}

void Validate(const SynthOptions& o) {
  const auto names = SynthPresetNames();
  const bool known = std::find(names.begin(), names.end(), o.preset) != names.end() ||
                     o.preset == "transfer" || o.preset == "crossover";
  if (!known) {
    throw UsageError("unknown preset '" + o.preset +
                     "' (expected recovery, saturation, capacity, transfer or crossover)");
  }
  if (o.format != "csv" && o.format != "jsonl") throw UsageError("--format must be csv or jsonl");
  if (!(o.noise >= 0.0)) throw UsageError("--noise must be >= 0");
  for (double n : o.n_values) {
    if (!(n > 0.0) || n != std::floor(n)) throw UsageError("--n-values must be positive integers");
  }
}

void RunSynth(const SynthOptions& o, OutputDir& dir, std::ostream& out) {
  const TableFormat fmt = ParseTableFormat(o.format);
  const std::string ext = "." + o.format;
  Json report = Report("synth_report");
  Json files = Json::array();

  if (o.preset == "transfer") {
    const auto set = GenerateTransferCurves(o.languages, o.common.seed, o.noise);
    {
      auto f = dir.Open("curves" + ext);
      WriteCurves(f, set.curves, fmt);
    }
    Json truth = Report("transfer_truth");
    truth["d_mono"] = set.d_mono;
    truth["d_max"] = set.d_max;
    Json bts = Json::array();
    for (const auto& [pair, v] : set.bts) {
      bts.push_back({{"source", pair.first}, {"target", pair.second}, {"bts", v}});
    }
    truth["bts"] = bts;
    dir.WriteJson("truth.json", truth);
    files = {"curves" + ext, "truth.json"};
    report["curves"] = set.curves.size();
    out << "wrote " << set.curves.size() << " transfer curves\n";
  } else if (o.preset == "crossover") {
    std::vector<std::int64_t> sizes;
    for (double n : o.n_values) sizes.push_back(std::llround(n));
    if (sizes.empty()) sizes = DefaultModelSizes();
    const auto curves = GenerateCrossoverCurves(sizes, o.target, o.common.seed, o.noise);
    {
      auto f = dir.Open("curves" + ext);
      WriteCurves(f, curves, fmt);
    }
    Json truth = Report("crossover_truth");
    truth["language"] = o.target;
    truth["n_values"] = sizes;
    dir.WriteJson("truth.json", truth);
    files = {"curves" + ext, "truth.json"};
    report["curves"] = curves.size();
    out << "wrote " << curves.size() << " crossover curves\n";
  } else {
    const SynthPreset preset = MakeSynthPreset(o.preset, o.common.seed, o.noise);
    const RunSet runs = GenerateRuns(preset.design, preset.catalog);
    {
      auto f = dir.Open("runs" + ext);
      WriteRuns(f, runs, fmt);
    }
    {
      auto f = dir.Open("catalog.csv");
      WriteCatalog(f, preset.catalog, TableFormat::kCsv);
    }
    if (const auto* truths = std::get_if<std::vector<AtlasTruth>>(&preset.design.law)) {
      Json laws = Json::array();
      for (const auto& t : *truths) {
        laws.push_back({{"spec", ToJson(t.spec)}, {"params", ToJson(t.params)}});
      }
      Json truth = Report("atlas_law_set");
      truth["laws"] = laws;
      dir.WriteJson("truth.json", truth);
    } else {
      dir.WriteJson("truth.json", ToJson(std::get<CapacityParams>(preset.design.law)));
    }
    files = {"runs" + ext, "catalog.csv", "truth.json"};
    report["rows"] = runs.size();
    out << "wrote " << runs.size() << " rows\n";
  }
  report["files"] = files;
  report["config"] = ConfigJson(o);
  dir.WriteJson("synth.json", report);
}

}  // namespace atlas::cli
