// Copyright 2026 The Orthochain Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "orthochain/measure_opt.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orthochain/functionals.h"
#include "orthochain/rng.h"

namespace orthochain {
namespace {

// Log weights are kept within this window of the largest so no entry
// underflows to zero and pushes the objective to +inf.
constexpr double kLogWindow = 600.0;

std::vector<double> Normalize(const std::vector<double>& log_w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(log_w.size());
  double total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(std::max(log_w[i] - top, -kLogWindow));
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

// Largest |g_i|, or 1 when every entry vanishes.
double SupNorm(const std::vector<double>& g) {
  double top = 0;
  for (double x : g) top = std::max(top, std::abs(x));
  return top > 0 ? top : 1.0;
}

bool Stalled(const std::vector<double>& trace, const OptimizerOptions& opts) {
  if (static_cast<int>(trace.size()) <= opts.patience) return false;
  const double now = trace.back();
  const double before = trace[trace.size() - 1 - opts.patience];
  return std::abs(before - now) <= opts.tolerance * std::abs(now);
}

OptimizationResult WeakFromStart(const IndexSet& set,
                                 const OptimizerOptions& opts,
                                 std::vector<double> start) {
  const std::size_t n = set.size();
  OptimizationResult best;
  best.heuristic = true;
  best.measure = DiscreteMeasure::Explicit(start);
  best.value = -1;
  std::vector<double> w = std::move(start);
  std::vector<double> per_point(n);
  for (int it = 1; it <= opts.max_iters; ++it) {
    const DiscreteMeasure m = DiscreteMeasure::Explicit(w);
    double value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      per_point[i] = StrongFunctionalAt(m, set, i);
      value += m[i] * per_point[i];
    }
    if (value > best.value) {
      best.value = value;
      best.measure = m;
    }
    best.trace.push_back(best.value);
    best.iterations = it;
    if (Stalled(best.trace, opts)) {
      best.converged = true;
      break;
    }
    const double eta =
        opts.eta0 / std::sqrt(static_cast<double>(it)) / SupNorm(per_point);
    std::vector<double> log_w(n);
    for (std::size_t i = 0; i < n; ++i) {
      log_w[i] = std::log(m[i]) + eta * per_point[i];
    }
    w = Normalize(log_w);
  }
  return best;
}

}  // namespace

void OptimizerOptions::Validate() const {
  if (max_iters < 1 || restarts < 1 || patience < 1 || workers < 1 ||
      !(tolerance > 0) || !(tolerance < 1) || !(eta0 > 0)) {
    throw DomainError(
        "optimizer options must be positive with tolerance in (0, 1)");
  }
}

OptimizationResult MinimizeStrong(const IndexSet& set,
                                  const OptimizerOptions& opts) {
  opts.Validate();
  const std::size_t n = set.size();
  OptimizationResult best;
  if (n == 1) {
    best.measure = DiscreteMeasure::PointMass(1, 0);
    best.value = 0;
    best.converged = true;
    best.trace = {0.0};
    return best;
  }
  DiscreteMeasure current = DiscreteMeasure::Uniform(n);
  best.measure = current;
  best.value = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iters; ++it) {
    const StrongValue sv = StrongFunctional(current, set);
    if (sv.value < best.value) {
      best.value = sv.value;
      best.measure = current;
    }
    best.trace.push_back(best.value);
    best.iterations = it;
    if (Stalled(best.trace, opts)) {
      best.converged = true;
      break;
    }
    const std::vector<double> grad = StrongGradientAt(current, set, sv.argmax);
    const double eta = opts.eta0 / std::sqrt(static_cast<double>(it)) / SupNorm(grad);
    std::vector<double> log_w(n);
    for (std::size_t i = 0; i < n; ++i) {
      log_w[i] = std::log(current[i]) - eta * grad[i];
    }
    current = DiscreteMeasure::Explicit(Normalize(log_w));
  }
  return best;
}

OptimizationResult MaximizeWeak(const IndexSet& set,
                                const OptimizerOptions& opts) {
  opts.Validate();
  const std::size_t n = set.size();
  if (n == 1) {
    OptimizationResult r;
    r.measure = DiscreteMeasure::PointMass(1, 0);
    r.heuristic = true;
    r.converged = true;
    r.trace = {0.0};
    return r;
  }
  std::vector<OptimizationResult> runs(opts.restarts);
  ParallelFor(runs.size(), opts.workers, [&](std::size_t r) {
    std::vector<double> start;
    if (r == 0) {
      start.assign(n, 1.0 / static_cast<double>(n));
    } else {
      const auto draw = DiscreteMeasure::DirichletRandom(
          n, opts.seed ^ (0x9E3779B97F4A7C15ull * (r + 1)));
      start.assign(draw.weights().begin(), draw.weights().end());
    }
    runs[r] = WeakFromStart(set, opts, std::move(start));
  });
  std::size_t pick = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].value > runs[pick].value) pick = r;
  }
  return runs[pick];
}

DualityGapReport ComputeDualityGap(const IndexSet& set,
                                   const OptimizerOptions& opts) {
  DualityGapReport report;
  report.minimizer = MinimizeStrong(set, opts);
  report.maximizer = MaximizeWeak(set, opts);
  report.min_strong = report.minimizer.value;
  report.max_weak = report.maximizer.value;
  report.ratio = report.max_weak > 0 ? report.min_strong / report.max_weak : 1.0;
  for (const auto* r : {&report.minimizer, &report.maximizer}) {
    const double weak = WeakFunctional(r->measure, set);
    const double strong = StrongFunctional(r->measure, set).value;
    if (weak > strong * (1 + 1e-12)) report.weak_below_strong = false;
  }
  return report;
}

}  // namespace orthochain
