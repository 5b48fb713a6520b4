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

#ifndef ATLAS_SIMPLEX_H_
#define ATLAS_SIMPLEX_H_

#include <functional>
#include <span>
#include <vector>

namespace atlas {

struct NelderMeadOptions {
  int max_iters = 2000;
  // Stop when the spread of objective values across the simplex drops to tol.
  double tol = 1e-10;
  double initial_step = 0.2;
  // Fresh simplexes built around the incumbent after convergence; stops early
  // when a restart gains less than tol.
  int max_restarts = 3;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Derivative-free simplex descent. Non-finite objective values are treated as
// +inf. When `trace` is given it receives the incumbent value after every
// iteration; that sequence is non-increasing.
NelderMeadResult NelderMead(const Objective& f, std::vector<double> x0,
                            const NelderMeadOptions& options,
                            std::vector<double>* trace = nullptr);

}  // namespace atlas

#endif  // ATLAS_SIMPLEX_H_
