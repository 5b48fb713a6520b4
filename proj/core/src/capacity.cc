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

#include "atlas/capacity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "atlas/metrics.h"

namespace atlas {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void CheckPoint(double k, double n, double d_t) {
  Require(k >= 1.0, "capacity: k must be >= 1");
  Require(n > 0.0, "capacity: n must be positive");
  Require(d_t > 0.0, "capacity: d_t must be positive");
}

double NTerm(const CapacityParams& p, double k, double n) {
  return std::exp(p.log_a + p.phi * std::log(k) - p.alpha * std::log(n));
}

double DTerm(const CapacityParams& p, double k, double d_t) {
  return std::exp(p.log_b + p.psi * std::log(k) - p.beta * std::log(d_t));
}

class CapacityFitProblem final : public FitProblem {
 public:
  CapacityFitProblem(std::span<const CapacityObservation> obs,
                     const FitConfig& config) {
    auto add = [&](std::string name, double lo, double hi,
                   std::vector<double> grid) {
      if (auto it = config.init_grid.find(name); it != config.init_grid.end()) {
        grid = it->second;
      }
      params_.push_back({std::move(name), lo, hi, std::move(grid)});
    };
    add("l_inf", 0.0, 20.0, {0.0, 0.5, 1.0});
    add("log_a", -10.0, 40.0, {2.0, 6.0, 10.0, 14.0});
    add("log_b", -10.0, 40.0, {2.0, 6.0, 10.0, 14.0});
    add("alpha", 1e-3, 2.0, {0.2, 0.35, 0.5, 0.7});
    add("beta", 1e-3, 2.0, {0.2, 0.35, 0.5, 0.7});
    add("phi", -2.0, 2.0, {0.0, 0.1});
    add("psi", -2.0, 2.0, {-0.05, 0.05});
    for (const auto& o : obs) {
      CheckPoint(o.k, o.n, o.d_t);
      Require(o.loss > 0.0, "capacity: loss must be positive");
      rows_.push_back({std::log(o.k), std::log(o.n), std::log(o.d_t),
                       std::log(o.loss)});
    }
  }

  std::span<const FitParameter> parameters() const override { return params_; }
  std::size_t observations() const override { return rows_.size(); }

  void Residuals(std::span<const double> v, std::span<double> out) const override {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Row& r = rows_[i];
      const double pred = v[0] + std::exp(v[1] + v[5] * r.log_k - v[3] * r.log_n) +
                          std::exp(v[2] + v[6] * r.log_k - v[4] * r.log_d);
      out[i] = std::log(pred) - r.log_loss;
    }
  }

  static CapacityParams ToParams(std::span<const double> v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }

 private:
  struct Row {
    double log_k, log_n, log_d, log_loss;
  };
  std::vector<FitParameter> params_;
  std::vector<Row> rows_;
};

}  // namespace

void CapacityParams::Validate() const {
  Require(l_inf >= 0.0 && std::isfinite(l_inf), "capacity params: l_inf must be >= 0");
  Require(std::isfinite(log_a) && std::isfinite(log_b),
          "capacity params: log_a/log_b not finite");
  Require(alpha > 0.0 && alpha <= 2.0, "capacity params: alpha outside (0, 2]");
  Require(beta > 0.0 && beta <= 2.0, "capacity params: beta outside (0, 2]");
  Require(std::isfinite(phi) && std::isfinite(psi),
          "capacity params: phi/psi not finite");
}

double PredictCapacityLoss(const CapacityParams& p, double k, double n,
                           double d_t) {
  CheckPoint(k, n, d_t);
  return p.l_inf + NTerm(p, k, n) + DTerm(p, k, d_t);
}

TermWeights BaselineWeights(const CapacityParams& p, double k, double n,
                            double d_t) {
  CheckPoint(k, n, d_t);
  const double a = NTerm(p, k, n);
  const double b = DTerm(p, k, d_t);
  Require(a + b > 0.0, "baseline_weights: both loss terms are zero");
  const double w_n = a / (a + b);
  return {w_n, 1.0 - w_n};
}

TermWeights ComputeOptimalWeights(double alpha, double beta) {
  Require(alpha > 0.0 && beta > 0.0, "compute-optimal weights: alpha, beta must be > 0");
  const double w_n = beta / (alpha + beta);
  return {w_n, 1.0 - w_n};
}

void IsoLossCurve::Validate() const {
  Require(r > 0.0, "iso-loss: r must be positive");
  Require(alpha > 0.0 && beta > 0.0, "iso-loss: alpha, beta must be positive");
  Require(weights.w_n >= 0.0 && weights.w_n <= 1.0 && weights.w_d >= 0.0 &&
              weights.w_d <= 1.0,
          "iso-loss: weights outside [0, 1]");
}

double IsoLossCurve::MinFeasibleS() const {
  return std::pow(std::pow(r, phi) * weights.w_n, 1.0 / alpha);
}

double IsoLossCurve::MinFeasibleT() const {
  return std::pow(std::pow(r, psi) * weights.w_d, 1.0 / beta);
}

double IsoLossCurve::TGivenS(double s) const {
  Validate();
  Require(s > 0.0, "iso-loss: s must be positive");
  const double denom = 1.0 - std::pow(r, phi) * weights.w_n * std::pow(s, -alpha);
  if (!(denom > 0.0)) {
    throw DomainError("iso-loss: infeasible s; need s^alpha > r^phi * w_n (s > " +
                      std::to_string(MinFeasibleS()) + ")");
  }
  return std::pow(std::pow(r, psi) * weights.w_d / denom, 1.0 / beta);
}

double IsoLossCurve::SGivenT(double t) const {
  Validate();
  Require(t > 0.0, "iso-loss: t must be positive");
  const double denom = 1.0 - std::pow(r, psi) * weights.w_d * std::pow(t, -beta);
  if (!(denom > 0.0)) {
    throw DomainError("iso-loss: infeasible t; need t^beta > r^psi * w_d (t > " +
                      std::to_string(MinFeasibleT()) + ")");
  }
  return std::pow(std::pow(r, phi) * weights.w_n / denom, 1.0 / alpha);
}

double IsoLossCurve::Residual(double s, double t) const {
  return std::pow(r, phi) * weights.w_n * std::pow(s, -alpha) +
         std::pow(r, psi) * weights.w_d * std::pow(t, -beta) - 1.0;
}

Multipliers MultipliersFromRatios(double phi_over_alpha, double psi_over_beta,
                                  double r) {
  Require(r > 0.0, "compute_optimal_multipliers: r must be positive");
  Multipliers m;
  m.n_ratio = std::pow(r, phi_over_alpha);
  m.d_t_ratio = std::pow(r, psi_over_beta);
  m.d_tot_ratio = std::pow(r, 1.0 + psi_over_beta);
  m.c_ratio = m.n_ratio * m.d_tot_ratio;
  return m;
}

Multipliers ComputeOptimalMultipliers(double phi, double psi, double alpha,
                                      double beta, double r) {
  Require(alpha > 0.0 && beta > 0.0,
          "compute_optimal_multipliers: alpha, beta must be positive");
  return MultipliersFromRatios(phi / alpha, psi / beta, r);
}

Multipliers MinComputeOnCurve(const IsoLossCurve& c) {
  c.Validate();
  Require(c.weights.w_n > 0.0 && c.weights.w_d > 0.0,
          "iso-loss: both weights must be positive for a finite optimum");
  const double sum = c.alpha + c.beta;
  Multipliers m;
  m.n_ratio = std::pow(std::pow(c.r, c.phi) * c.weights.w_n * sum / c.beta,
                       1.0 / c.alpha);
  m.d_t_ratio = std::pow(std::pow(c.r, c.psi) * c.weights.w_d * sum / c.alpha,
                         1.0 / c.beta);
  m.d_tot_ratio = c.r * m.d_t_ratio;
  m.c_ratio = m.n_ratio * m.d_tot_ratio;
  return m;
}

Sensitivities MarginalSensitivities(const CapacityParams& p, double k,
                                    double n, double d_t) {
  CheckPoint(k, n, d_t);
  return {-p.alpha * NTerm(p, k, n), -p.beta * DTerm(p, k, d_t)};
}

std::vector<FrontierPoint> SweepFrontier(const IsoLossCurve& curve,
                                         std::span<const double> s_values,
                                         std::size_t count) {
  curve.Validate();
  std::vector<double> ss(s_values.begin(), s_values.end());
  if (ss.empty() && count > 0) {
    // From just inside the feasibility bound to well past the optimum.
    const double s_min = curve.MinFeasibleS();
    double s_opt = s_min;
    if (curve.weights.w_n > 0.0 && curve.weights.w_d > 0.0) {
      s_opt = MinComputeOnCurve(curve).n_ratio;
    }
    const double lo = std::log(std::max(s_min, 1e-12) * (1.0 + 1e-3));
    const double hi = std::log(std::max(s_opt, s_min) * 16.0);
    for (std::size_t i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      ss.push_back(std::exp(lo + f * (hi - lo)));
    }
  }
  std::vector<FrontierPoint> out;
  out.reserve(ss.size());
  for (double s : ss) {
    FrontierPoint p;
    p.s = s;
    p.t = curve.TGivenS(s);
    p.d_tot_ratio = curve.r * p.t;
    p.c_ratio = p.s * p.d_tot_ratio;
    out.push_back(p);
  }
  return out;
}

PlanReport Plan(const CapacityParams& p, const PlanQuery& query) {
  Require(query.r > 0.0, "plan: r must be positive");
  PlanReport report;
  report.r = query.r;
  report.weights = query.baseline
                       ? BaselineWeights(p, query.baseline->k, query.baseline->n,
                                         query.baseline->d_t)
                       : ComputeOptimalWeights(p.alpha, p.beta);
  const IsoLossCurve curve{query.r, p.phi, p.psi, p.alpha, p.beta, report.weights};
  report.optimum = query.baseline
                       ? MinComputeOnCurve(curve)
                       : ComputeOptimalMultipliers(p.phi, p.psi, p.alpha, p.beta,
                                                   query.r);
  report.frontier = SweepFrontier(curve, query.sweep);
  return report;
}

std::vector<CapacityObservation> CapacityObservations(
    const RunSet& runs, const std::optional<Language>& target) {
  std::vector<CapacityObservation> out;
  for (const auto& run : runs) {
    if (target && run.eval_language != *target) continue;
    if (!run.InMixture(run.eval_language)) continue;
    const auto langs = run.MixtureLanguages();
    const double w0 = run.sampling_weights.at(langs.front());
    const bool uniform = std::all_of(langs.begin(), langs.end(), [&](const auto& l) {
      return std::fabs(run.sampling_weights.at(l) - w0) <= 1e-9;
    });
    if (!uniform || run.total_tokens <= 0) continue;
    const double k = static_cast<double>(langs.size());
    out.push_back({k, static_cast<double>(run.n_params),
                   static_cast<double>(run.total_tokens) / k, run.loss});
  }
  return out;
}

FitResult<CapacityParams> FitCapacity(
    std::span<const CapacityObservation> observations, const FitConfig& config) {
  constexpr std::size_t kFree = 7;
  if (observations.size() < kFree + 1) {
    throw FitError("capacity fit: needs at least " + std::to_string(kFree + 1) +
                   " observations, got " + std::to_string(observations.size()));
  }
  const CapacityFitProblem problem(observations, config);
  const RawFit raw = MultiStartFit(problem, config);
  FitResult<CapacityParams> result;
  result.params = CapacityFitProblem::ToParams(raw.values);
  result.objective = raw.objective;
  result.n_starts_tried = raw.n_starts_tried;
  result.best_start_index = raw.best_start_index;
  result.converged = raw.converged;
  std::vector<double> predicted, observed;
  for (const auto& o : observations) {
    observed.push_back(o.loss);
    predicted.push_back(PredictCapacityLoss(result.params, o.k, o.n, o.d_t));
  }
  try {
    result.train_r2 = RSquared(predicted, observed);
  } catch (const DataError&) {
    result.train_r2 = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace atlas
