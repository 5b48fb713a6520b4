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

#ifndef ATLAS_METRICS_H_
#define ATLAS_METRICS_H_

#include <span>
#include <vector>

namespace atlas {

// 1 - SS_res / SS_tot. May be negative. Throws DataError on length mismatch,
// empty input, or zero variance in `observed`.
double RSquared(std::span<const double> predicted,
                std::span<const double> observed);

// 1-based ranks; tied values share their average rank.
std::vector<double> AverageRanks(std::span<const double> values);

double PearsonCorrelation(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks. Throws DataError when either side is
// constant or the lengths differ.
double SpearmanRho(std::span<const double> x, std::span<const double> y);

}  // namespace atlas

#endif  // ATLAS_METRICS_H_
