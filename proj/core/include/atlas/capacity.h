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

#ifndef ATLAS_CAPACITY_H_
#define ATLAS_CAPACITY_H_

#include <optional>
#include <span>
#include <vector>

#include "atlas/fitter.h"
#include "atlas/run_data.h"

namespace atlas {

// L(K, N, D_t) = l_inf + A K^phi / N^alpha + B K^psi / D_t^beta.
// At K = 1 this is the Chinchilla form with E = l_inf.
struct CapacityParams {
  double l_inf = 0.0;
  double log_a = 0.0;
  double log_b = 0.0;
  double alpha = 0.3;
  double beta = 0.3;
  double phi = 0.0;
  double psi = 0.0;

  // Throws DomainError.
  void Validate() const;
  friend bool operator==(const CapacityParams&, const CapacityParams&) = default;
};

double PredictCapacityLoss(const CapacityParams& p, double k, double n,
                           double d_t);

// Shares of the reducible loss carried by the model-size and data terms.
struct TermWeights {
  double w_n = 0.5;
  double w_d = 0.5;
};

TermWeights BaselineWeights(const CapacityParams& p, double k, double n,
                            double d_t);
// Weights of a compute-optimal baseline: w_n = beta / (alpha + beta).
TermWeights ComputeOptimalWeights(double alpha, double beta);

// Normalized iso-loss constraint for K -> rK:
//   r^phi w_n s^-alpha + r^psi w_d t^-beta = 1
// with s = N'/N and t = D_t'/D_t.
struct IsoLossCurve {
  double r = 1.0;
  double phi = 0.0;
  double psi = 0.0;
  double alpha = 0.3;
  double beta = 0.3;
  TermWeights weights;

  // Throws DomainError for non-positive r, alpha, beta or weights outside [0,1].
  void Validate() const;
  // Solutions are only defined above these bounds (exclusive).
  double MinFeasibleS() const;
  double MinFeasibleT() const;
  // Throw DomainError naming the violated bound when infeasible.
  double TGivenS(double s) const;
  double SGivenT(double t) const;
  double Residual(double s, double t) const;
};

struct Multipliers {
  double n_ratio = 1.0;      // N'/N
  double d_t_ratio = 1.0;    // per-language data D_t'/D_t
  double d_tot_ratio = 1.0;  // total tokens, r * d_t_ratio
  double c_ratio = 1.0;      // compute, n_ratio * d_tot_ratio
};

// Minimum-compute point from a compute-optimal baseline:
// N x r^(phi/alpha), D_t x r^(psi/beta), D_tot x r^(1+psi/beta),
// C x r^(1+phi/alpha+psi/beta).
Multipliers ComputeOptimalMultipliers(double phi, double psi, double alpha,
                                      double beta, double r);
// Same, from the exponent ratios phi/alpha and psi/beta directly.
Multipliers MultipliersFromRatios(double phi_over_alpha, double psi_over_beta,
                                  double r);
// Minimum-compute point on an arbitrary iso-loss curve: the term shares
// after the change are beta/(alpha+beta) and alpha/(alpha+beta).
Multipliers MinComputeOnCurve(const IsoLossCurve& curve);

struct Sensitivities {
  double d_log_n = 0.0;  // dL / d ln N
  double d_log_d = 0.0;  // dL / d ln D_t
};

Sensitivities MarginalSensitivities(const CapacityParams& p, double k,
                                    double n, double d_t);

struct FrontierPoint {
  double s = 0.0;
  double t = 0.0;
  double d_tot_ratio = 0.0;
  double c_ratio = 0.0;
};

// Frontier samples at the given s values, or (when `s_values` is empty)
// `count` log-spaced values spanning the feasible region around the optimum.
std::vector<FrontierPoint> SweepFrontier(const IsoLossCurve& curve,
                                         std::span<const double> s_values = {},
                                         std::size_t count = 64);

struct CapacityBaseline {
  double k = 1.0;
  double n = 1.0;
  double d_t = 1.0;
};

struct PlanQuery {
  double r = 1.0;
  // Empty: compute-optimal baseline.
  std::optional<CapacityBaseline> baseline;
  // Explicit s values for frontier tracing; default sweep when empty.
  std::vector<double> sweep;
};

struct PlanReport {
  double r = 1.0;
  TermWeights weights;
  Multipliers optimum;
  std::vector<FrontierPoint> frontier;
};

// Requires full parameters; exponent ratios alone only give `optimum`.
PlanReport Plan(const CapacityParams& p, const PlanQuery& query);

// One uniform-sampling observation: K languages, D_t = D_tot / K.
struct CapacityObservation {
  double k = 1.0;
  double n = 1.0;
  double d_t = 1.0;
  double loss = 1.0;
};

// Rows of evenly sampled mixtures whose eval language is in the mixture.
// With `target` set only that language's rows are used; otherwise all
// languages are pooled.
std::vector<CapacityObservation> CapacityObservations(
    const RunSet& runs, const std::optional<Language>& target);

FitResult<CapacityParams> FitCapacity(
    std::span<const CapacityObservation> observations, const FitConfig& config);

}  // namespace atlas

#endif  // ATLAS_CAPACITY_H_
