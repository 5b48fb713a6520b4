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

#include "atlas/metrics.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "atlas/error.h"
#include "atlas/random.h"
#include "test_support.h"

namespace atlas {
namespace {

TEST(RSquaredTest, PerfectAndMeanPredictors) {
  const std::vector<double> obs{1.0, 2.0, 4.0, 7.0};
  EXPECT_DOUBLE_EQ(RSquared(obs, obs), 1.0);
  const std::vector<double> mean(4, 3.5);
  EXPECT_DOUBLE_EQ(RSquared(mean, obs), 0.0);
}

TEST(RSquaredTest, WorseThanMeanGoesNegative) {
  // SS_tot = 100, residuals (13, 5, 2, 1) give SS_res = 199.
  const std::vector<double> obs{-5.0, 5.0, -5.0, 5.0};
  const std::vector<double> pred{8.0, 10.0, -3.0, 6.0};
  EXPECT_NEAR(RSquared(pred, obs), -0.99, 1e-12);
}

TEST(RSquaredTest, Errors) {
  const std::vector<double> a{1.0, 1.0}, b{1.0, 2.0}, c{1.0};
  EXPECT_THROW(RSquared(b, a), DataError);  // zero variance
  EXPECT_THROW(RSquared(c, b), DataError);
  EXPECT_THROW(RSquared(std::vector<double>{}, std::vector<double>{}), DataError);
}

TEST(RSquaredTest, ShiftInvariantProperty) {
  Rng rng(21);
  for (int c = 0; c < testing::kPropertyCases; ++c) {
    const std::size_t n = 3 + rng.Below(20);
    std::vector<double> obs(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      obs[i] = rng.Uniform(-5, 5);
      pred[i] = obs[i] + rng.Normal();
    }
    const double shift = rng.Uniform(-100, 100);
    auto so = obs, sp = pred;
    for (auto& v : so) v += shift;
    for (auto& v : sp) v += shift;
    EXPECT_NEAR(RSquared(sp, so), RSquared(pred, obs), 1e-9);
    EXPECT_LE(RSquared(pred, obs), 1.0);
  }
}

TEST(RanksTest, TiesShareAverageRank) {
  EXPECT_EQ(AverageRanks(std::vector<double>{10, 20, 20, 30}),
            (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(AverageRanks(std::vector<double>{3, 1, 2}), (std::vector<double>{3, 1, 2}));
}

TEST(SpearmanTest, ReversedRanksGiveMinusOne) {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{50, 40, 30, 20, 10};
  EXPECT_DOUBLE_EQ(SpearmanRho(x, y), -1.0);
  EXPECT_DOUBLE_EQ(SpearmanRho(x, x), 1.0);
}

TEST(SpearmanTest, ConstantInputThrows) {
  const std::vector<double> x{1, 2, 3}, y{4, 4, 4};
  EXPECT_THROW(SpearmanRho(x, y), DataError);
}

TEST(SpearmanTest, InvariantUnderMonotoneTransformProperty) {
  Rng rng(8);
  for (int c = 0; c < testing::kPropertyCases; ++c) {
    const std::size_t n = 3 + rng.Below(30);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::round(rng.Uniform(-5, 5));  // rounding creates ties
      y[i] = x[i] + 3 * rng.Normal();
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    std::vector<double> tx(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) {
      tx[i] = std::exp(x[i]);
      ty[i] = y[i] * y[i] * y[i] - 7.0;
    }
    EXPECT_NEAR(SpearmanRho(tx, ty), SpearmanRho(x, y), 1e-12);
  }
}

TEST(PearsonTest, LinearRelationIsOne) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  EXPECT_NEAR(PearsonCorrelation(x, y), 1.0, 1e-15);
}

}  // namespace
}  // namespace atlas
