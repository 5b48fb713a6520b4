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

#ifndef ATLAS_RANDOM_H_
#define ATLAS_RANDOM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace atlas {

// SplitMix64 finalizer. Used to derive independent per-cell / per-tree seeds
// from a base seed so parallel work partitions the seed space.
std::uint64_t MixSeed(std::uint64_t base, std::uint64_t index);

// Small portable generator. The standard distributions are implementation
// defined, so everything that feeds a report goes through this class to keep
// outputs identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t NextU64();
  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);
  // Standard normal via Box-Muller (one value per call, no caching).
  double Normal();

  // Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> Permutation(std::size_t n);

 private:
  std::uint64_t state_;
};

}  // namespace atlas

#endif  // ATLAS_RANDOM_H_
