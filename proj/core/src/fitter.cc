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

#include "atlas/fitter.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "atlas/metrics.h"
#include "atlas/parallel.h"
#include "atlas/random.h"
#include "atlas/simplex.h"

namespace atlas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDefaultTau = 0.1;

double ToInternal(double value, const FitParameter& p) {
  if (p.hi <= p.lo) return 0.0;
  const double u = std::clamp((value - p.lo) / (p.hi - p.lo), 0.0, 1.0);
  return std::asin(2.0 * u - 1.0);
}

double FromInternal(double z, const FitParameter& p) {
  return p.lo + (p.hi - p.lo) * 0.5 * (1.0 + std::sin(z));
}

// Per-run inputs of a law fit, resolved once against the catalog.
struct LawObservation {
  double log_n = 0.0;
  double log_obs = 0.0;
  double d_target = 0.0;
  double u_target = 0.0;
  std::vector<std::pair<double, double>> transfer;  // (tokens, U), K order
  double d_other = 0.0;
  double u_other = 0.0;
};

inline double Saturate(double d, double u, double lambda) {
  if (d <= u) return d;
  return u * (1.0 - std::expm1(-lambda * (d / u - 1.0)) / lambda);
}

class LawFitProblem final : public FitProblem {
 public:
  LawFitProblem(const RunSet& runs, std::span<const std::size_t> rows,
                const LawSpec& spec, const CorpusCatalog& catalog,
                const FitConfig& config)
      : variant_(spec.variant), transfer_set_(spec.transfer_set) {
    BuildParameters(config);
    observations_.reserve(rows.size());
    for (std::size_t row : rows) {
      const RunRecord& run = runs[row];
      try {
        observations_.push_back(Observe(run, spec, catalog));
      } catch (const DataError& e) {
        throw DataError("run '" + run.run_id + "': " + e.what());
      }
    }
  }

  std::span<const FitParameter> parameters() const override { return params_; }
  std::size_t observations() const override { return observations_.size(); }

  void Residuals(std::span<const double> v,
                 std::span<double> out) const override {
    const double e = v[0], log_a = v[1], log_b = v[2], alpha = v[3],
                 beta = v[4];
    std::size_t k = 5;
    double lambda = 1.0;
    if (UsesSaturation(variant_)) lambda = v[k++];
    const std::size_t tau_begin = k;
    if (UsesTransferTerms(variant_)) k += transfer_set_.size();
    const double tau_other = UsesOtherTerm(variant_) ? v[k] : 0.0;
    for (std::size_t i = 0; i < observations_.size(); ++i) {
      const LawObservation& o = observations_[i];
      double d_eff;
      if (!UsesSaturation(variant_)) {
        d_eff = o.d_target;
      } else {
        d_eff = o.d_target > 0.0 ? Saturate(o.d_target, o.u_target, lambda) : 0.0;
        if (UsesTransferTerms(variant_)) {
          for (std::size_t j = 0; j < o.transfer.size(); ++j) {
            const auto [d, u] = o.transfer[j];
            if (d > 0.0) d_eff += v[tau_begin + j] * Saturate(d, u, lambda);
          }
        }
        if (o.d_other > 0.0) d_eff += tau_other * Saturate(o.d_other, o.u_other, lambda);
      }
      const double pred = e + std::exp(log_a - alpha * o.log_n) +
                          std::exp(log_b - beta * std::log(d_eff));
      out[i] = std::log(pred) - o.log_obs;
    }
  }

  LawParams ToParams(std::span<const double> v) const {
    LawParams p;
    p.variant = variant_;
    p.e_irreducible = v[0];
    p.log_a = v[1];
    p.log_b = v[2];
    p.alpha = v[3];
    p.beta = v[4];
    std::size_t k = 5;
    if (UsesSaturation(variant_)) p.lambda = v[k++];
    if (UsesTransferTerms(variant_)) {
      for (const auto& lang : transfer_set_) p.tau_transfer[lang] = v[k++];
    }
    if (UsesOtherTerm(variant_)) p.tau_other = v[k++];
    return p;
  }

 private:
  void BuildParameters(const FitConfig& config) {
    auto add = [&](std::string name, double lo, double hi,
                   std::vector<double> grid) {
      if (auto it = config.init_grid.find(name); it != config.init_grid.end()) {
        grid = it->second;
      }
      params_.push_back({std::move(name), lo, hi, std::move(grid)});
    };
    add("e_irreducible", 0.0, 20.0, {0.0, 0.5, 1.0});
    add("log_a", -10.0, 40.0, {2.0, 6.0, 10.0, 14.0});
    add("log_b", -10.0, 40.0, {2.0, 6.0, 10.0, 14.0});
    add("alpha", LawBounds::kExponentMin, LawBounds::kExponentMax,
        {0.2, 0.35, 0.5, 0.7});
    add("beta", LawBounds::kExponentMin, LawBounds::kExponentMax,
        {0.2, 0.35, 0.5, 0.7});
    if (UsesSaturation(variant_)) add("lambda", 1e-3, 50.0, {0.5, 1.0, 4.0});
    if (UsesTransferTerms(variant_)) {
      for (const auto& lang : transfer_set_) {
        auto it = config.tau_init.find(lang);
        const double init = it == config.tau_init.end()
                                ? kDefaultTau
                                : std::clamp(it->second, 0.0, 1.0);
        add("tau:" + lang, LawBounds::kTauMin, LawBounds::kTauMax, {init});
      }
    }
    if (UsesOtherTerm(variant_)) {
      add("tau_other", LawBounds::kTauMin, LawBounds::kTauMax, {kDefaultTau});
    }
  }

  LawObservation Observe(const RunRecord& run, const LawSpec& spec,
                         const CorpusCatalog& catalog) const {
    const TokenBreakdown b =
        TokenAccounting(run, spec.target_language, spec.transfer_set);
    LawObservation o;
    o.log_n = std::log(static_cast<double>(run.n_params));
    o.log_obs = std::log(run.loss);
    o.d_target = static_cast<double>(b.d_target);
    if (!UsesSaturation(variant_)) {
      if (b.d_target <= 0) throw DataError("no target-language tokens");
      return o;
    }
    o.u_target = static_cast<double>(catalog.UniqueTokens(b.target));
    if (UsesTransferTerms(variant_)) {
      for (const auto& [lang, d] : b.d_transfer) {
        o.transfer.emplace_back(static_cast<double>(d),
                                static_cast<double>(catalog.UniqueTokens(lang)));
      }
    }
    if (UsesOtherTerm(variant_) && b.d_other > 0) {
      for (const auto& lang : b.other_languages) {
        o.u_other += static_cast<double>(catalog.UniqueTokens(lang));
      }
      if (o.u_other > 0.0) {
        o.d_other = static_cast<double>(b.d_other);
      } else if (static_cast<double>(b.d_other) >
                 1e-6 * static_cast<double>(b.Total())) {
        throw DataError("no languages recorded for remainder tokens");
      }
    }
    const bool has_other_sources =
        (UsesOtherTerm(variant_) && o.d_other > 0.0) ||
        std::any_of(o.transfer.begin(), o.transfer.end(),
                    [](const auto& t) { return t.first > 0.0; });
    if (b.d_target <= 0 && !has_other_sources) {
      throw DataError("effective data is zero for this variant");
    }
    return o;
  }

  LawVariant variant_;
  std::vector<Language> transfer_set_;
  std::vector<FitParameter> params_;
  std::vector<LawObservation> observations_;
};

}  // namespace

void FitConfig::Validate() const {
  if (n_grid_starts < 0 || n_random_starts < 0 ||
      n_grid_starts + n_random_starts < 1) {
    throw DataError("fit config: need at least one start");
  }
  if (!(huber_delta > 0.0)) throw DataError("fit config: huber_delta must be > 0");
  if (max_iters < 1) throw DataError("fit config: max_iters must be >= 1");
  if (!(convergence_tol > 0.0)) {
    throw DataError("fit config: convergence_tol must be > 0");
  }
  for (const auto& [name, grid] : init_grid) {
    if (grid.empty()) throw DataError("fit config: empty grid for " + name);
  }
}

double HuberLoss(double residual, double delta) {
  const double a = std::fabs(residual);
  return a <= delta ? 0.5 * residual * residual : delta * (a - 0.5 * delta);
}

double RobustObjective(const FitProblem& problem, std::span<const double> values,
                       double huber_delta) {
  std::vector<double> residuals(problem.observations());
  problem.Residuals(values, residuals);
  double total = 0.0;
  for (double r : residuals) {
    if (!std::isfinite(r)) return kInf;
    total += HuberLoss(r, huber_delta);
  }
  return total;
}

RawFit MultiStartFit(const FitProblem& problem, const FitConfig& config) {
  config.Validate();
  const auto params = problem.parameters();
  const std::size_t dim = params.size();

  // Score the full Cartesian grid.
  std::size_t grid_size = 1;
  for (const auto& p : params) {
    if (p.grid.empty()) throw DataError("fit: empty grid for " + p.name);
    grid_size *= p.grid.size();
  }
  auto grid_point = [&](std::size_t index) {
    std::vector<double> v(dim);
    for (std::size_t j = dim; j-- > 0;) {
      const auto& g = params[j].grid;
      v[j] = std::clamp(g[index % g.size()], params[j].lo, params[j].hi);
      index /= g.size();
    }
    return v;
  };
  std::vector<double> grid_scores(grid_size);
  ParallelFor(grid_size, [&](std::size_t i) {
    grid_scores[i] = RobustObjective(problem, grid_point(i), config.huber_delta);
  });
  std::vector<std::size_t> ranked(grid_size);
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    return grid_scores[a] < grid_scores[b];
  });

  std::vector<std::vector<double>> starts;
  const std::size_t n_grid =
      std::min<std::size_t>(grid_size, static_cast<std::size_t>(config.n_grid_starts));
  for (std::size_t i = 0; i < n_grid; ++i) starts.push_back(grid_point(ranked[i]));
  Rng rng(MixSeed(config.seed, 0));
  for (int i = 0; i < config.n_random_starts; ++i) {
    std::vector<double> v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = rng.Uniform(params[j].lo, params[j].hi);
    starts.push_back(std::move(v));
  }

  NelderMeadOptions nm;
  nm.max_iters = config.max_iters;
  nm.tol = config.convergence_tol;

  struct StartOutcome {
    std::vector<double> values;
    double objective = kInf;
    double start_objective = kInf;
    bool converged = false;
  };
  std::vector<StartOutcome> outcomes(starts.size());
  ParallelFor(starts.size(), [&](std::size_t s) {
    std::vector<double> z0(dim);
    for (std::size_t j = 0; j < dim; ++j) z0[j] = ToInternal(starts[s][j], params[j]);
    std::vector<double> values(dim);
    auto objective = [&](std::span<const double> z) {
      for (std::size_t j = 0; j < dim; ++j) values[j] = FromInternal(z[j], params[j]);
      return RobustObjective(problem, values, config.huber_delta);
    };
    StartOutcome& out = outcomes[s];
    out.start_objective = objective(z0);
    const NelderMeadResult r = NelderMead(objective, std::move(z0), nm);
    out.values.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) out.values[j] = FromInternal(r.x[j], params[j]);
    out.objective = r.value;
    out.converged = r.converged;
  });

  RawFit fit;
  fit.n_starts_tried = starts.size();
  fit.objective = kInf;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    fit.start_objectives.push_back(outcomes[s].start_objective);
    if (outcomes[s].objective < fit.objective) {
      fit.objective = outcomes[s].objective;
      fit.best_start_index = s;
    }
  }
  if (!std::isfinite(fit.objective)) {
    throw FitError("fit: all " + std::to_string(starts.size()) +
                   " starts diverged (objective not finite); best grid score " +
                   std::to_string(grid_scores[ranked.front()]));
  }
  fit.values = outcomes[fit.best_start_index].values;
  fit.converged = outcomes[fit.best_start_index].converged;
  return fit;
}

std::vector<std::size_t> UsableRunIndices(const RunSet& runs,
                                          const LawSpec& spec) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].eval_language == spec.target_language) rows.push_back(i);
  }
  return rows;
}

std::vector<double> Residuals(const LawParams& params, const LawSpec& spec,
                              const RunSet& runs, const CorpusCatalog& catalog) {
  const AtlasLaw law(spec, params, catalog);
  std::vector<double> out;
  for (std::size_t row : UsableRunIndices(runs, spec)) {
    const RunRecord& run = runs[row];
    double pred = 0.0;
    try {
      pred = law.PredictRun(run);
    } catch (const std::exception& e) {
      throw DataError("run '" + run.run_id + "' is not evaluable: " + e.what());
    }
    out.push_back(std::log(pred) - std::log(run.loss));
  }
  return out;
}

std::size_t FreeParameterCount(const LawSpec& spec) {
  std::size_t n = 5;
  if (UsesSaturation(spec.variant)) ++n;
  if (UsesTransferTerms(spec.variant)) n += spec.transfer_set.size();
  if (UsesOtherTerm(spec.variant)) ++n;
  return n;
}

FitResult<LawParams> Fit(const RunSet& runs, const LawSpec& spec,
                         const CorpusCatalog& catalog, const FitConfig& config) {
  spec.Validate();
  const auto rows = UsableRunIndices(runs, spec);
  const std::size_t required = FreeParameterCount(spec) + 1;
  if (rows.size() < required) {
    throw FitError("fit: " + std::string(LawVariantName(spec.variant)) +
                   " needs at least " + std::to_string(required) +
                   " observations of '" + spec.target_language + "', got " +
                   std::to_string(rows.size()));
  }
  const LawFitProblem problem(runs, rows, spec, catalog, config);
  const RawFit raw = MultiStartFit(problem, config);

  FitResult<LawParams> result;
  result.params = problem.ToParams(raw.values);
  result.objective = raw.objective;
  result.n_starts_tried = raw.n_starts_tried;
  result.best_start_index = raw.best_start_index;
  result.converged = raw.converged;

  std::vector<double> residuals(rows.size());
  problem.Residuals(raw.values, residuals);
  std::vector<double> predicted(rows.size()), observed(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    observed[i] = runs[rows[i]].loss;
    predicted[i] = observed[i] * std::exp(residuals[i]);
  }
  try {
    result.train_r2 = RSquared(predicted, observed);
  } catch (const DataError&) {
    result.train_r2 = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace atlas
