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

#include "atlas/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace atlas {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

double Eval(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct Run {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

Run Descend(const Objective& f, const std::vector<double>& x0, double f0,
            const NelderMeadOptions& opt, std::vector<double>* trace) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1, f0);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += opt.initial_step;
    vals[i + 1] = Eval(f, pts[i + 1]);
  }
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto blend = [&](double t, const std::vector<double>& toward,
                   std::vector<double>& out) {
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = centroid[j] + t * (toward[j] - centroid[j]);
    }
  };

  int it = 0;
  bool converged = false;
  for (; it < opt.max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    if (std::isfinite(vals[worst]) && vals[worst] - vals[best] <= opt.tol) {
      converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& p = pts[order[k]];
      for (std::size_t j = 0; j < n; ++j) centroid[j] += p[j];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    blend(-kReflect, pts[worst], xr);
    const double fr = Eval(f, xr);
    if (fr < vals[best]) {
      blend(-kExpand, pts[worst], xe);
      const double fe = Eval(f, xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      blend(outside ? -kContract : kContract, pts[worst], xc);
      const double fc = Eval(f, xc);
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          auto& p = pts[order[k]];
          for (std::size_t j = 0; j < n; ++j) {
            p[j] = pts[best][j] + kShrink * (p[j] - pts[best][j]);
          }
          vals[order[k]] = Eval(f, p);
        }
      }
    }
    if (trace) trace->push_back(*std::min_element(vals.begin(), vals.end()));
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  const std::size_t best = static_cast<std::size_t>(best_it - vals.begin());
  return {pts[best], vals[best], it, converged};
}

}  // namespace

NelderMeadResult NelderMead(const Objective& f, std::vector<double> x0,
                            const NelderMeadOptions& options,
                            std::vector<double>* trace) {
  NelderMeadResult result;
  result.x = std::move(x0);
  result.value = Eval(f, result.x);
  if (result.x.empty()) {
    result.converged = true;
    return result;
  }
  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    Run run = Descend(f, result.x, result.value, options, trace);
    result.iterations += run.iterations;
    const double gain = result.value - run.value;
    if (run.value <= result.value) {
      result.x = std::move(run.x);
      result.value = run.value;
    }
    result.converged = run.converged;
    if (!(gain > options.tol)) break;
  }
  return result;
}

}  // namespace atlas
