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

#ifndef ATLAS_FOREST_H_
#define ATLAS_FOREST_H_

#include <cstdint>
#include <span>
#include <vector>

namespace atlas {

// Row-major feature matrix with a fixed column count.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}
  FeatureMatrix(std::size_t cols, std::vector<double> data);

  void AddRow(std::span<const double> row);
  std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct ForestConfig {
  std::size_t n_trees = 300;
  std::uint64_t seed = 0;
  // 0 means unlimited depth: nodes split until pure or unsplittable.
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
};

// CART regression tree; splits minimize the summed squared error of the two
// children, thresholds sit midway between adjacent distinct feature values.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf mean
  };

  // Fits on the multiset `sample` of row indices (bootstrap draws repeat).
  static RegressionTree Fit(const FeatureMatrix& x, std::span<const double> y,
                            std::span<const std::size_t> sample,
                            const ForestConfig& config);

  double Predict(std::span<const double> row) const;
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t Depth() const;

 private:
  std::vector<Node> nodes_;
};

class Forest {
 public:
  // Each tree sees a bootstrap resample of size n drawn with a seed derived
  // from (config.seed, tree index). Throws DataError with fewer than 2 rows.
  static Forest Train(const FeatureMatrix& x, std::span<const double> y,
                      const ForestConfig& config);

  double Predict(std::span<const double> row) const;
  std::vector<double> Predict(const FeatureMatrix& x) const;
  std::size_t n_trees() const { return trees_.size(); }
  std::uint64_t seed() const { return seed_; }
  std::span<const RegressionTree> trees() const { return trees_; }

 private:
  std::vector<RegressionTree> trees_;
  std::uint64_t seed_ = 0;
};

struct CrossValidationResult {
  double r2 = 0.0;
  double spearman = 0.0;
  // Out-of-fold prediction for every row, in row order.
  std::vector<double> predictions;
};

// Seeded permutation, k contiguous folds of it, out-of-fold predictions
// pooled before scoring.
CrossValidationResult CrossValidate(const FeatureMatrix& x,
                                    std::span<const double> y, std::size_t k,
                                    std::uint64_t seed,
                                    const ForestConfig& forest_config);

}  // namespace atlas

#endif  // ATLAS_FOREST_H_
