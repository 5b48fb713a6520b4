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

#include "atlas/crossover.h"

#include <cmath>

#include <gtest/gtest.h>

#include "atlas/error.h"
#include "atlas/transfer.h"
#include "test_support.h"

namespace atlas {
namespace {

LearningCurve Curve(std::string id, std::vector<CurvePoint> pts) {
  return LearningCurve(std::move(id), "en", std::move(pts));
}

std::vector<CrossoverPoint> LawPoints(double a, double b, std::vector<double> sizes) {
  std::vector<CrossoverPoint> pts;
  for (double n : sizes) pts.push_back({n, std::exp(a * std::pow(n, b))});
  return pts;
}

TEST(CrossoverTokensTest, IdenticalCurvesCrossAtStart) {
  const auto c = Curve("p", {{1e9, 4.0}, {1e10, 3.0}});
  EXPECT_EQ(*CrossoverTokens(c, c), 1e9);
}

TEST(CrossoverTokensTest, InteriorCrossing) {
  const auto pre = Curve("pretrain", {{1e9, 4.0}, {1e12, 2.5}});
  const auto ft = Curve("finetune", {{1e8, 3.0}, {1e13, 3.0}});
  EXPECT_NEAR(*CrossoverTokens(pre, ft), 1e11, 1e11 * 1e-9);
}

TEST(CrossoverTokensTest, CrossingAtKnotAndNoCrossing) {
  const auto pre = Curve("pretrain", {{1, 5.0}, {10, 4.0}, {100, 3.0}});
  const auto ft = Curve("finetune", {{1, 4.0}, {100, 4.0}});
  EXPECT_NEAR(*CrossoverTokens(pre, ft), 10.0, 1e-12);
  const auto low = Curve("finetune", {{1, 1.0}, {100, 1.0}});
  EXPECT_FALSE(CrossoverTokens(pre, low).has_value());
}

TEST(CrossoverTokensTest, DisjointRanges) {
  EXPECT_THROW(CrossoverTokens(Curve("p", {{1, 3.0}, {2, 2.0}}),
                               Curve("f", {{3, 3.0}, {4, 2.0}})),
               DataError);
}

TEST(CrossoverTokensTest, BracketsSignChangeProperty) {
  Rng rng(12);
  for (int i = 0; i < testing::kPropertyCases; ++i) {
    const auto pre = testing::RandomDecreasingCurve(rng, 3 + rng.Below(6));
    auto ft_pts = std::vector<CurvePoint>(pre.points().begin(), pre.points().end());
    for (auto& p : ft_pts) p.loss = pre.points().back().loss + rng.Uniform(-0.5, 0.5);
    const auto ft = Curve("f", ft_pts);
    const auto x = CrossoverTokens(pre, ft);
    if (!x) {
      for (const auto& p : pre.points()) EXPECT_GT(LossAt(pre, p.tokens), LossAt(ft, p.tokens));
      continue;
    }
    EXPECT_LE(LossAt(pre, *x) - LossAt(ft, *x), 1e-9);
    if (*x > pre.first_tokens()) {
      const double before = *x * (1 - 1e-6);
      EXPECT_GT(LossAt(pre, before) - LossAt(ft, before), -1e-9);
    }
  }
}

TEST(CrossoverFitTest, RecoversExactLaw) {
  // Small N keeps exp(log C) inside double range at b = 1.65.
  const auto pts = LawPoints(5.0, 1.65, {0.5, 1.0, 2.0, 4.0, 8.0});
  const auto fit = FitCrossoverLaw(pts);
  EXPECT_NEAR(fit.coeff, 5.0, 5e-6);
  EXPECT_NEAR(fit.exponent, 1.65, 1e-6);
  EXPECT_LT(fit.sse, 1e-12);
}

TEST(CrossoverFitTest, TwoPointsInterpolateExactly) {
  const std::vector<CrossoverPoint> pts{{1e9, std::exp(40.0)}, {4e9, std::exp(50.0)}};
  const auto fit = FitCrossoverLaw(pts);
  EXPECT_NEAR(CrossoverLogCompute(fit, 1e9), 40.0, 1e-9);
  EXPECT_NEAR(CrossoverLogCompute(fit, 4e9), 50.0, 1e-9);
  EXPECT_NEAR(fit.exponent, std::log(50.0 / 40.0) / std::log(4.0), 1e-12);
}

TEST(CrossoverFitTest, FlatDataGivesZeroExponent) {
  const std::vector<CrossoverPoint> pts{{1e8, 1e20}, {1e9, 1e20}, {1e10, 1e20}};
  const auto fit = FitCrossoverLaw(pts);
  EXPECT_NEAR(fit.exponent, 0.0, 1e-9);
  EXPECT_NEAR(fit.coeff, std::log(1e20), 1e-9);
}

TEST(CrossoverFitTest, Errors) {
  const std::vector<CrossoverPoint> same{{1e9, 1e20}, {1e9, 1e21}};
  EXPECT_THROW(FitCrossoverLaw(same), DataError);
  const std::vector<CrossoverPoint> neg{{1e9, 1e20}, {-1, 1e21}};
  EXPECT_THROW(FitCrossoverLaw(neg), DataError);
  const std::vector<CrossoverPoint> tiny{{1e8, 0.1}, {1e9, 0.2}, {1e10, 0.3}};
  EXPECT_THROW(FitCrossoverLaw(tiny), FitError);  // log C < 0 everywhere
}

TEST(CrossoverFitTest, ScaleInvarianceInModelSize) {
  const std::vector<CrossoverPoint> pts{
      {1e8, 1e19}, {5e8, 3e20}, {2e9, 2e21}, {8e9, 4e22}};
  const auto fit = FitCrossoverLaw(pts);
  std::vector<CrossoverPoint> scaled = pts;
  for (auto& p : scaled) p.n_params *= 1000;
  const auto fit2 = FitCrossoverLaw(scaled);
  EXPECT_NEAR(fit2.exponent, fit.exponent, 1e-7);
  for (const auto& p : pts) {
    EXPECT_NEAR(CrossoverLogCompute(fit2, p.n_params * 1000),
                CrossoverLogCompute(fit, p.n_params), 1e-6);
  }
}

TEST(DecideTest, BoundaryGoesToPretrain) {
  const CrossoverFit fit{2.0, 0.15, 0.0};
  const double th = CrossoverLogCompute(fit, 1e9);
  EXPECT_EQ(DecideLog(fit, 1e9, th), Regime::kPretrain);
  EXPECT_EQ(DecideLog(fit, 1e9, std::nextafter(th, 0.0)), Regime::kFinetune);
  EXPECT_STREQ(RegimeName(Regime::kFinetune), "finetune");
  EXPECT_THROW(Decide(fit, 1e9, 0.0), DomainError);
}

TEST(DecideTest, TwoBillionAtOneFortyFourBillionTokens) {
  // Crossovers at 144B tokens for 2B and a proportional law elsewhere.
  std::vector<CrossoverPoint> pts;
  for (double n : {5e8, 1e9, 2e9, 4e9}) {
    pts.push_back({n, TrainingCompute(n, 144e9 * std::pow(n / 2e9, 0.2))});
  }
  const auto fit = FitCrossoverLaw(pts);
  const double at_2b = TrainingCompute(2e9, 144e9);
  EXPECT_NEAR(CrossoverLogCompute(fit, 2e9), std::log(at_2b), 1e-2);
  EXPECT_EQ(Decide(fit, 2e9, TrainingCompute(2e9, 150e9)), Regime::kPretrain);
  EXPECT_EQ(Decide(fit, 2e9, TrainingCompute(2e9, 138e9)), Regime::kFinetune);
}

TEST(DecideTest, MonotoneInBudgetProperty) {
  Rng rng(21);
  for (int i = 0; i < testing::kPropertyCases; ++i) {
    const CrossoverFit fit{rng.Uniform(1, 10), rng.Uniform(-0.3, 0.3), 0.0};
    const double n = testing::LogUniform(rng, 1e7, 1e11);
    const double c1 = testing::LogUniform(rng, 1e10, 1e30);
    const double c2 = c1 * testing::LogUniform(rng, 1.0, 1e5);
    if (Decide(fit, n, c1) == Regime::kPretrain) {
      EXPECT_EQ(Decide(fit, n, c2), Regime::kPretrain);
    }
  }
}

}  // namespace
}  // namespace atlas
