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

#include <cmath>

#include "gtest/gtest.h"
#include "orthochain/errors.h"
#include "orthochain/functionals.h"

namespace orthochain {
namespace {

IndexSet TwoPoint() { return BuildIndexSet(CoefficientSequence::Explicit({0.5})); }

IndexSet Grid16() {
  return BuildIndexSet(CoefficientSequence::Explicit(std::vector<double>(15, 0.25)));
}

// Dense grid over w in (0, 1) for the two-point strong functional.
double TwoPointGridMinimum(double* argmin) {
  double best = INFINITY;
  const int n = 1000000;
  for (int i = 1; i < n; ++i) {
    const double w = static_cast<double>(i) / n;
    const double v = std::max(0.5 / std::sqrt(w), 0.5 / std::sqrt(1 - w));
    if (v < best) {
      best = v;
      *argmin = w;
    }
  }
  return best;
}

TEST(OptimizerOptionsTest, Validate) {
  OptimizerOptions o;
  EXPECT_NO_THROW(o.Validate());
  o.tolerance = 1.0;
  EXPECT_THROW(o.Validate(), DomainError);
  o = {};
  o.max_iters = 0;
  EXPECT_THROW(o.Validate(), DomainError);
  o = {};
  o.restarts = 0;
  EXPECT_THROW(o.Validate(), DomainError);
}

TEST(MinimizeStrongTest, TwoPointMatchesGridOracle) {
  double argmin = 0;
  const double grid = TwoPointGridMinimum(&argmin);
  EXPECT_NEAR(argmin, 0.5, 1e-6);
  EXPECT_NEAR(grid, std::sqrt(0.5), 1e-9);
  const auto r = MinimizeStrong(TwoPoint(), {});
  EXPECT_NEAR(r.value, grid, 1e-6);
  EXPECT_LE(std::abs(r.measure[0] - 0.5), 1e-4);
}

TEST(MinimizeStrongTest, Singleton) {
  IndexSet set;
  set.points = {0.0L};
  const auto r = MinimizeStrong(set, {});
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.measure[0], 1.0);
}

class MinimizeStrongPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(MinimizeStrongPropertyTest, NeverWorseThanUniformAndConsistent) {
  const std::vector<CoefficientSequence> families = {
      CoefficientSequence::Power(1.0, 63), CoefficientSequence::Geometric(0.5, 20),
      CoefficientSequence::Power(0.5, 32), CoefficientSequence::Explicit(std::vector<double>(15, 0.25))};
  const IndexSet set = BuildIndexSet(families[GetParam()]);
  OptimizerOptions opts;
  opts.max_iters = 500;
  const auto r = MinimizeStrong(set, opts);
  const double uniform = StrongFunctional(DiscreteMeasure::Uniform(set.size()), set).value;
  EXPECT_LE(r.value, uniform + 1e-9);
  EXPECT_NEAR(r.value, StrongFunctional(r.measure, set).value, 1e-10 * r.value);
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
  EXPECT_LE(r.iterations, opts.max_iters);
}

INSTANTIATE_TEST_SUITE_P(Sets, MinimizeStrongPropertyTest, ::testing::Range(0, 4));

TEST(MaximizeWeakTest, TwoPointAndFloor) {
  OptimizerOptions opts;
  opts.seed = 5;
  opts.max_iters = 300;
  const auto r = MaximizeWeak(TwoPoint(), opts);
  EXPECT_TRUE(r.heuristic);
  EXPECT_NEAR(r.value, std::sqrt(0.5), 1e-6);

  const IndexSet grid = Grid16();
  const auto g = MaximizeWeak(grid, opts);
  EXPECT_GE(g.value, WeakFunctional(DiscreteMeasure::Uniform(grid.size()), grid) - 1e-9);
  EXPECT_NEAR(g.value, WeakFunctional(g.measure, grid), 1e-10 * g.value);
}

TEST(MaximizeWeakTest, SingletonAndWorkerIndependence) {
  IndexSet single;
  single.points = {0.0L};
  EXPECT_EQ(MaximizeWeak(single, {}).value, 0.0);

  const IndexSet set = BuildIndexSet(CoefficientSequence::Power(1.0, 31));
  OptimizerOptions opts;
  opts.seed = 17;
  opts.max_iters = 100;
  const auto a = MaximizeWeak(set, opts);
  opts.workers = 4;
  const auto b = MaximizeWeak(set, opts);
  EXPECT_EQ(a.value, b.value);
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_EQ(a.measure[i], b.measure[i]);
}

TEST(DualityGapTest, TwoPointAndGrid) {
  OptimizerOptions opts;
  opts.seed = 1;
  opts.max_iters = 300;
  const auto two = ComputeDualityGap(TwoPoint(), opts);
  EXPECT_NEAR(two.min_strong, std::sqrt(0.5), 1e-6);
  EXPECT_NEAR(two.max_weak, std::sqrt(0.5), 1e-6);
  EXPECT_NEAR(two.ratio, 1.0, 1e-5);
  EXPECT_TRUE(two.weak_below_strong);

  const IndexSet grid = Grid16();
  const auto g = ComputeDualityGap(grid, opts);
  EXPECT_TRUE(g.weak_below_strong);
  EXPECT_LE(WeakFunctional(g.minimizer.measure, grid), StrongFunctional(g.minimizer.measure, grid).value);
  EXPECT_LE(WeakFunctional(g.maximizer.measure, grid), StrongFunctional(g.maximizer.measure, grid).value);
  EXPECT_GT(g.ratio, 0);

  IndexSet single;
  single.points = {0.0L};
  const auto s = ComputeDualityGap(single, opts);
  EXPECT_EQ(s.min_strong, 0.0);
  EXPECT_EQ(s.max_weak, 0.0);
}

}  // namespace
}  // namespace orthochain
