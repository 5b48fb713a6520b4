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

#ifndef ATLAS_FITTER_H_
#define ATLAS_FITTER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "atlas/laws.h"
#include "atlas/run_data.h"

namespace atlas {

struct FitConfig {
  // Per-parameter grid overrides, keyed by parameter name (e_irreducible,
  // log_a, log_b, alpha, beta, lambda, tau_other, tau:<lang>, l_inf, phi, psi).
  std::map<std::string, std::vector<double>> init_grid;
  // The whole grid is scored; local search starts from the best
  // `n_grid_starts` grid points plus `n_random_starts` seeded random points.
  int n_grid_starts = 12;
  int n_random_starts = 8;
  double huber_delta = 1e-3;
  int max_iters = 2000;
  double convergence_tol = 1e-10;
  std::uint64_t seed = 0;
  // Initial transfer weights, e.g. normalized transfer scores. Missing
  // languages start at 0.1.
  std::map<Language, double> tau_init;

  // Throws DataError.
  void Validate() const;
};

double HuberLoss(double residual, double delta);

template <typename Params>
struct FitResult {
  Params params;
  double objective = 0.0;
  std::size_t n_starts_tried = 0;
  std::size_t best_start_index = 0;
  bool converged = false;
  double train_r2 = 0.0;
};

// One box-constrained parameter of a fit problem.
struct FitParameter {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> grid;
};

// A residual model the multi-start driver can minimize. Implementations must
// be safe to call concurrently on distinct output buffers.
class FitProblem {
 public:
  virtual ~FitProblem() = default;
  virtual std::span<const FitParameter> parameters() const = 0;
  virtual std::size_t observations() const = 0;
  // Log-space residuals for `values` (already inside the box).
  virtual void Residuals(std::span<const double> values,
                         std::span<double> out) const = 0;
};

struct RawFit {
  std::vector<double> values;
  double objective = 0.0;
  std::size_t n_starts_tried = 0;
  std::size_t best_start_index = 0;
  bool converged = false;
  // Objective at each start point before local search, in start order.
  std::vector<double> start_objectives;
};

// Sum of Huber losses of the residuals; +inf when any residual is non-finite.
double RobustObjective(const FitProblem& problem, std::span<const double> values,
                       double huber_delta);

// Multi-start bounded minimization. Parameters are mapped through a smooth
// sine clamp so the simplex runs unconstrained. Starts run in parallel; the
// winner is the lowest objective, ties to the lowest start index.
RawFit MultiStartFit(const FitProblem& problem, const FitConfig& config);

// Rows of `runs` a law for `spec` is fit on: eval_language == target.
std::vector<std::size_t> UsableRunIndices(const RunSet& runs,
                                          const LawSpec& spec);

// log(predicted) - log(observed) for every usable run, in run order. Throws
// DataError naming the run_id of any run the law cannot evaluate.
std::vector<double> Residuals(const LawParams& params, const LawSpec& spec,
                              const RunSet& runs, const CorpusCatalog& catalog);

FitResult<LawParams> Fit(const RunSet& runs, const LawSpec& spec,
                         const CorpusCatalog& catalog, const FitConfig& config);

// Free parameter count for a spec, e.g. 5 for bsl.
std::size_t FreeParameterCount(const LawSpec& spec);

}  // namespace atlas

#endif  // ATLAS_FITTER_H_
