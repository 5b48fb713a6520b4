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

#ifndef ATLAS_CROSSOVER_H_
#define ATLAS_CROSSOVER_H_

#include <optional>
#include <span>
#include <string>

#include "atlas/run_data.h"

namespace atlas {

// Smallest token count at which pretrain loss - finetune loss turns
// non-positive, located by bisection in log tokens on the interpolated
// difference. nullopt when it stays positive over the shared range. Throws
// DataError when the token ranges do not overlap.
std::optional<double> CrossoverTokens(const LearningCurve& pretrain,
                                      const LearningCurve& finetune);

// log C = coeff * N^exponent, natural log.
struct CrossoverFit {
  double coeff = 1.0;
  double exponent = 0.0;
  double sse = 0.0;
};

struct CrossoverPoint {
  double n_params = 0.0;
  double compute = 0.0;  // C at the crossover
};

// Least squares on (N, log C): closed-form coefficient for each exponent,
// exponent by grid search on [-4, 4] refined by golden section. Two points
// with same-sign log C are interpolated exactly. Throws DataError with fewer
// than two distinct N or non-positive inputs; FitError when the coefficient
// comes out non-positive.
CrossoverFit FitCrossoverLaw(std::span<const CrossoverPoint> points);

// Threshold on log C at model size n.
double CrossoverLogCompute(const CrossoverFit& fit, double n_params);

enum class Regime { kPretrain, kFinetune };
const char* RegimeName(Regime r);

// Pretrain iff log(budget) >= threshold; the boundary goes to pretrain.
Regime Decide(const CrossoverFit& fit, double n_params, double budget_c);
Regime DecideLog(const CrossoverFit& fit, double n_params, double log_budget_c);

// C = 6 N D.
inline double TrainingCompute(double n_params, double tokens) {
  return 6.0 * n_params * tokens;
}

}  // namespace atlas

#endif  // ATLAS_CROSSOVER_H_
