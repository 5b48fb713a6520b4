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

#include "atlas/forest.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "atlas/error.h"
#include "atlas/metrics.h"
#include "atlas/parallel.h"
#include "atlas/random.h"

namespace atlas {

FeatureMatrix::FeatureMatrix(std::size_t cols, std::vector<double> data)
    : cols_(cols), data_(std::move(data)) {
  if (cols_ == 0 || data_.size() % cols_ != 0) {
    throw DataError("feature matrix: data size is not a multiple of columns");
  }
}

void FeatureMatrix::AddRow(std::span<const double> row) {
  if (row.size() != cols_) throw DataError("feature matrix: wrong row width");
  data_.insert(data_.end(), row.begin(), row.end());
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const double> y,
              const ForestConfig& config, std::vector<RegressionTree::Node>& nodes)
      : x_(x), y_(y), config_(config), nodes_(nodes) {}

  int Build(std::vector<std::size_t> idx, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double sum = 0.0;
    for (std::size_t i : idx) sum += y_[i];
    nodes_[id].value = sum / static_cast<double>(idx.size());

    const bool pure = std::all_of(idx.begin(), idx.end(),
                                  [&](std::size_t i) { return y_[i] == y_[idx[0]]; });
    const bool depth_capped = config_.max_depth > 0 && depth >= config_.max_depth;
    if (pure || depth_capped || idx.size() < 2 * config_.min_leaf) return id;

    Split best = FindSplit(idx);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      (x_.at(i, best.feature) <= best.threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    const int l = Build(std::move(left), depth + 1);
    const int r = Build(std::move(right), depth + 1);
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double sse = 0.0;
  };

  Split FindSplit(const std::vector<std::size_t>& idx) {
    const std::size_t n = idx.size();
    Split best;
    bool found = false;
    std::vector<std::size_t> order(idx);
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x_.at(a, f) < x_.at(b, f);
      });
      double total = 0.0, total_sq = 0.0;
      for (std::size_t i : order) {
        total += y_[i];
        total_sq += y_[i] * y_[i];
      }
      double left = 0.0, left_sq = 0.0;
      for (std::size_t pos = 1; pos < n; ++pos) {
        const double yi = y_[order[pos - 1]];
        left += yi;
        left_sq += yi * yi;
        const double lo = x_.at(order[pos - 1], f);
        const double hi = x_.at(order[pos], f);
        if (!(lo < hi)) continue;
        if (pos < config_.min_leaf || n - pos < config_.min_leaf) continue;
        const double nl = static_cast<double>(pos);
        const double nr = static_cast<double>(n - pos);
        const double right = total - left;
        const double right_sq = total_sq - left_sq;
        const double sse =
            (left_sq - left * left / nl) + (right_sq - right * right / nr);
        if (!found || sse < best.sse) {
          found = true;
          best.feature = static_cast<int>(f);
          best.sse = sse;
          best.threshold = lo + 0.5 * (hi - lo);
          // Guard against the midpoint rounding onto the upper value.
          if (!(best.threshold < hi)) best.threshold = lo;
        }
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  std::span<const double> y_;
  const ForestConfig& config_;
  std::vector<RegressionTree::Node>& nodes_;
};

}  // namespace

RegressionTree RegressionTree::Fit(const FeatureMatrix& x,
                                   std::span<const double> y,
                                   std::span<const std::size_t> sample,
                                   const ForestConfig& config) {
  if (sample.empty()) throw DataError("regression tree: empty sample");
  RegressionTree tree;
  TreeBuilder builder(x, y, config, tree.nodes_);
  builder.Build({sample.begin(), sample.end()}, 0);
  return tree;
}

double RegressionTree::Predict(std::span<const double> row) const {
  int id = 0;
  while (nodes_[id].feature >= 0) {
    const Node& node = nodes_[id];
    id = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes_[id].value;
}

std::size_t RegressionTree::Depth() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t max_depth = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    if (node.feature < 0) continue;
    depth[node.left] = depth[node.right] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

Forest Forest::Train(const FeatureMatrix& x, std::span<const double> y,
                     const ForestConfig& config) {
  const std::size_t n = x.rows();
  if (n != y.size()) throw DataError("forest: feature/label count mismatch");
  if (n < 2) throw DataError("forest: need at least 2 samples, got " + std::to_string(n));
  if (config.n_trees == 0) throw DataError("forest: n_trees must be >= 1");
  if (config.min_leaf == 0) throw DataError("forest: min_leaf must be >= 1");
  Forest forest;
  forest.seed_ = config.seed;
  forest.trees_.resize(config.n_trees);
  ParallelFor(config.n_trees, [&](std::size_t t) {
    Rng rng(MixSeed(config.seed, t));
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = rng.Below(n);
    forest.trees_[t] = RegressionTree::Fit(x, y, sample, config);
  });
  return forest;
}

double Forest::Predict(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.Predict(row);
  return sum / static_cast<double>(trees_.size());
}

std::vector<double> Forest::Predict(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = Predict(x.row(i));
  return out;
}

CrossValidationResult CrossValidate(const FeatureMatrix& x,
                                    std::span<const double> y, std::size_t k,
                                    std::uint64_t seed,
                                    const ForestConfig& forest_config) {
  const std::size_t n = x.rows();
  if (n != y.size()) throw DataError("cross_validate: feature/label count mismatch");
  if (k < 2) throw DataError("cross_validate: k must be >= 2");
  if (k > n) {
    throw DataError("cross_validate: k = " + std::to_string(k) + " exceeds " +
                    std::to_string(n) + " samples");
  }
  Rng rng(MixSeed(seed, 0xCF));
  const auto perm = rng.Permutation(n);
  CrossValidationResult result;
  result.predictions.assign(n, 0.0);
  for (std::size_t fold = 0; fold < k; ++fold) {
    const std::size_t begin = fold * n / k;
    const std::size_t end = (fold + 1) * n / k;
    FeatureMatrix train_x(x.cols());
    std::vector<double> train_y;
    for (std::size_t p = 0; p < n; ++p) {
      if (p >= begin && p < end) continue;
      train_x.AddRow(x.row(perm[p]));
      train_y.push_back(y[perm[p]]);
    }
    ForestConfig cfg = forest_config;
    cfg.seed = MixSeed(forest_config.seed, fold);
    const Forest forest = Forest::Train(train_x, train_y, cfg);
    for (std::size_t p = begin; p < end; ++p) {
      result.predictions[perm[p]] = forest.Predict(x.row(perm[p]));
    }
  }
  result.r2 = RSquared(result.predictions, y);
  result.spearman = SpearmanRho(result.predictions, y);
  return result;
}

}  // namespace atlas
