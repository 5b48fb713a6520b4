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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "atlas/error.h"
#include "atlas/table_io.h"
#include "atlas/transfer.h"

namespace atlas {
namespace {

constexpr int kBisectionSteps = 200;

struct Normalized {
  std::vector<double> log_ratio;  // log(N / N_max)
  std::vector<double> y;          // log C
  double log_n_max = 0.0;
};

// Best coefficient (on the normalized scale) and SSE at exponent b.
std::pair<double, double> Solve(const Normalized& d, double b) {
  double yu = 0.0, uu = 0.0;
  std::vector<double> u(d.y.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = std::exp(b * d.log_ratio[i]);
    yu += d.y[i] * u[i];
    uu += u[i] * u[i];
  }
  const double a = yu / uu;
  double sse = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = d.y[i] - a * u[i];
    sse += r * r;
  }
  return {a, sse};
}

}  // namespace

std::optional<double> CrossoverTokens(const LearningCurve& pretrain,
                                      const LearningCurve& finetune) {
  const double lo = std::max(pretrain.first_tokens(), finetune.first_tokens());
  const double hi = std::min(pretrain.last_tokens(), finetune.last_tokens());
  if (lo > hi) {
    throw DataError("crossover: token ranges of '" + pretrain.regime_id() +
                    "' and '" + finetune.regime_id() + "' do not overlap");
  }
  std::set<double> knots{lo, hi};
  for (const auto* c : {&pretrain, &finetune}) {
    for (const auto& p : c->points()) {
      if (p.tokens >= lo && p.tokens <= hi) knots.insert(p.tokens);
    }
  }
  auto diff = [&](double t) { return LossAt(pretrain, t) - LossAt(finetune, t); };

  double prev = *knots.begin();
  if (diff(prev) <= 0.0) return prev;
  for (auto it = std::next(knots.begin()); it != knots.end(); ++it) {
    const double cur = *it;
    if (diff(cur) > 0.0) {
      prev = cur;
      continue;
    }
    // Bracket (prev, cur]: positive at prev, non-positive at cur.
    const bool linear = prev == 0.0;
    double a = linear ? prev : std::log(prev);
    double b = linear ? cur : std::log(cur);
    auto at = [&](double x) { return linear ? x : std::exp(x); };
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = a + 0.5 * (b - a);
      if (mid <= a || mid >= b) break;
      const double t = std::clamp(at(mid), prev, cur);
      (diff(t) > 0.0 ? a : b) = mid;
    }
    return std::clamp(at(b), prev, cur);
  }
  return std::nullopt;
}

CrossoverFit FitCrossoverLaw(std::span<const CrossoverPoint> points) {
  std::set<double> distinct;
  for (const auto& p : points) {
    if (!(p.n_params > 0.0) || !(p.compute > 0.0) || !std::isfinite(p.n_params) ||
        !std::isfinite(p.compute)) {
      throw DataError("crossover fit: points must be positive and finite, got (" +
                      FormatDouble(p.n_params) + ", " + FormatDouble(p.compute) + ")");
    }
    distinct.insert(p.n_params);
  }
  if (distinct.size() < 2) {
    throw DataError("crossover fit: need at least 2 distinct model sizes");
  }

  Normalized d;
  d.log_n_max = std::log(*distinct.rbegin());
  for (const auto& p : points) {
    d.log_ratio.push_back(std::log(p.n_params) - d.log_n_max);
    d.y.push_back(std::log(p.compute));
  }

  double best_b = 0.0;
  if (points.size() == 2 && d.y[0] * d.y[1] > 0.0) {
    best_b = std::log(d.y[0] / d.y[1]) / (d.log_ratio[0] - d.log_ratio[1]);
  } else {
    double best_sse = Solve(d, 0.0).second;
    for (int i = -400; i <= 400; ++i) {
      const double b = i / 100.0;
      const double sse = Solve(d, b).second;
      if (sse < best_sse) {
        best_sse = sse;
        best_b = b;
      }
    }
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = best_b - 0.01, hi = best_b + 0.01;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = Solve(d, x1).second, f2 = Solve(d, x2).second;
    while (hi - lo > 1e-12) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = Solve(d, x1).second;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = Solve(d, x2).second;
      }
    }
    const double refined = 0.5 * (lo + hi);
    if (Solve(d, refined).second <= best_sse) best_b = refined;
  }

  const auto [a_norm, sse] = Solve(d, best_b);
  CrossoverFit fit;
  fit.exponent = best_b;
  fit.coeff = a_norm * std::exp(-best_b * d.log_n_max);
  fit.sse = sse;
  if (!(fit.coeff > 0.0) || !std::isfinite(fit.coeff)) {
    throw FitError("crossover fit: coefficient " + FormatDouble(fit.coeff) +
                   " is not positive");
  }
  return fit;
}

double CrossoverLogCompute(const CrossoverFit& fit, double n_params) {
  return fit.coeff * std::pow(n_params, fit.exponent);
}

const char* RegimeName(Regime r) {
  return r == Regime::kPretrain ? "pretrain" : "finetune";
}

Regime DecideLog(const CrossoverFit& fit, double n_params, double log_budget_c) {
  return log_budget_c >= CrossoverLogCompute(fit, n_params) ? Regime::kPretrain
                                                             : Regime::kFinetune;
}

Regime Decide(const CrossoverFit& fit, double n_params, double budget_c) {
  if (!(n_params > 0.0) || !(budget_c > 0.0)) {
    throw DomainError("decide: model size and budget must be positive");
  }
  return DecideLog(fit, n_params, std::log(budget_c));
}

}  // namespace atlas
