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

#include "orthochain/series_core.h"

#include <cmath>
#include <set>

#include "gtest/gtest.h"
#include "oracles.h"
#include "orthochain/errors.h"

namespace orthochain {
namespace {

IndexSet MakeSet(std::vector<Real> points) {
  IndexSet s;
  s.points = std::move(points);
  return s;
}

TEST(CoefficientSequenceTest, RejectsEmptyAndNonPositive) {
  try {
    CoefficientSequence::Explicit({});
    FAIL() << "expected an error";
  } catch (const InvalidCoefficientError& e) {
    EXPECT_STREQ(e.what(), "at least one coefficient required");
  }
  EXPECT_THROW(CoefficientSequence::Explicit({0.5, 0.0}), InvalidCoefficientError);
  EXPECT_THROW(CoefficientSequence::Explicit({-0.1}), InvalidCoefficientError);
  EXPECT_THROW(CoefficientSequence::Power(1.0, 0), InvalidCoefficientError);
  EXPECT_THROW(CoefficientSequence::Geometric(-0.5, 3), InvalidCoefficientError);
}

TEST(CoefficientSequenceTest, FamiliesStoreSquares) {
  const auto p = CoefficientSequence::Power(1.0, 4);
  EXPECT_EQ(p.size(), 4u);
  EXPECT_DOUBLE_EQ(static_cast<double>(p.squares()[3]), 1.0 / 16);
  EXPECT_DOUBLE_EQ(static_cast<double>(p.value(1)), 0.5);
  const auto g = CoefficientSequence::Geometric(0.5, 3);
  EXPECT_DOUBLE_EQ(static_cast<double>(g.squares()[2]), 0.125);
  EXPECT_DOUBLE_EQ(static_cast<double>(g.RawTotal()), 0.875);
}

TEST(CoefficientSequenceTest, TailMass) {
  EXPECT_FALSE(CoefficientSequence::Explicit({0.5}).TailMass().has_value());
  EXPECT_TRUE(std::isinf(*CoefficientSequence::Power(0.5, 64).TailMass()));
  // sum_{n>3} 2^-n = 2^-3.
  EXPECT_NEAR(*CoefficientSequence::Geometric(0.5, 3).TailMass(), 0.125, 1e-15);
  // sum_{n>64} n^-2 = trigamma(65) = 0.015504...
  EXPECT_NEAR(*CoefficientSequence::Power(1.0, 64).TailMass(), 0.0155035654393389, 1e-9);
}

TEST(BuildIndexSetTest, SpecExamples) {
  const IndexSet a = BuildIndexSet(CoefficientSequence::Explicit({0.5, 0.5}));
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a.points[0], 0.0L);
  EXPECT_EQ(a.points[1], 0.25L);
  EXPECT_EQ(a.points[2], 0.5L);
  EXPECT_EQ(a.scale, 1.0L);

  const IndexSet b = BuildIndexSet(CoefficientSequence::Explicit({1.0}));
  EXPECT_EQ(b.scale, 1.0L - ldexpl(1.0L, -32));
  EXPECT_EQ(b.points[1], 1.0L - ldexpl(1.0L, -32));

  const IndexSet c = BuildIndexSet(CoefficientSequence::Explicit({0.1}));
  EXPECT_EQ(c.scale, 1.0L);
  EXPECT_EQ(c.points[1], static_cast<Real>(0.1) * static_cast<Real>(0.1));
}

TEST(BuildIndexSetTest, GapsEqualSquaresWithoutScaling) {
  const auto coeffs = CoefficientSequence::Geometric(0.5, 40);
  const IndexSet set = BuildIndexSet(coeffs);
  ASSERT_EQ(set.scale, 1.0L);
  for (std::size_t n = 1; n < set.size(); ++n) {
    EXPECT_GT(set.points[n], set.points[n - 1]);
    EXPECT_EQ(set.points[n] - set.points[n - 1], coeffs.squares()[n - 1]);
  }
}

TEST(BuildIndexSetTest, ScaledSetStaysBelowOne) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Power(0.5, 64));
  EXPECT_LT(set.points.back(), 1.0L);
  EXPECT_NEAR(static_cast<double>(set.points.back()), 1.0, 1e-9);
  for (std::size_t n = 1; n < set.size(); ++n) EXPECT_GT(set.points[n], set.points[n - 1]);
}

TEST(BuildIndexSetTest, IndexOfFindsPoints) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Explicit({0.5, 0.5}));
  EXPECT_EQ(set.IndexOf(0.25L), 1u);
  EXPECT_THROW(set.IndexOf(0.3L), DomainError);
}

TEST(PartitionTest, TwoPointDepthOne) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Explicit({0.5}));
  const PartitionTree tree = BuildPartition(set, 1);
  EXPECT_EQ(tree.separation_depth(), 1);
  ASSERT_EQ(tree.level(1).size(), 2u);
  EXPECT_EQ(tree.level(1)[0].index, 0u);
  EXPECT_EQ(tree.level(1)[0].size(), 1u);
  EXPECT_EQ(tree.level(1)[1].index, 1u);
  EXPECT_EQ(tree.level(1)[1].begin, 1u);
}

TEST(PartitionTest, SingletonSet) {
  const IndexSet set = MakeSet({0.0L});
  EXPECT_EQ(SeparationDepth(set), 0);
  const PartitionTree tree = BuildPartition(set, 5);
  for (std::size_t k = 0; k <= tree.depth(); ++k) {
    ASSERT_EQ(tree.level(k).size(), 1u);
    EXPECT_EQ(tree.level(k)[0].index, 0u);
  }
}

TEST(PartitionTest, GridAtLevelOne) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Explicit({0.5, 0.5, 0.5}));
  const PartitionTree tree = BuildPartition(set, 1);
  ASSERT_EQ(tree.level(1).size(), 4u);
  for (std::uint64_t j = 0; j < 4; ++j) {
    EXPECT_EQ(tree.level(1)[j].index, j);
    EXPECT_EQ(tree.level(1)[j].size(), 1u);
  }
}

TEST(PartitionTest, RejectsBadDepth) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Explicit({0.5}));
  EXPECT_THROW(BuildPartition(set, -1), DomainError);
  EXPECT_THROW(BuildPartition(set, 33), DomainError);
}

TEST(PartitionTest, GeometricHalfSeparatesAtDeepestLevel) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Geometric(0.5, 64));
  std::set<Real> distinct(set.points.begin(), set.points.end());
  EXPECT_EQ(distinct.size(), set.size());
  EXPECT_EQ(SeparationDepth(set), 32);
}

class PartitionPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(PartitionPropertyTest, NestingMembershipAndSeparation) {
  const auto coeffs = GetParam() == 0 ? CoefficientSequence::Power(1.0, 63)
                                      : CoefficientSequence::Geometric(0.5, 16);
  const IndexSet set = BuildIndexSet(coeffs);
  const PartitionTree tree = BuildPartition(set);
  ASSERT_EQ(static_cast<int>(tree.depth()), tree.separation_depth());
  for (std::size_t k = 0; k <= tree.depth(); ++k) {
    std::uint32_t covered = 0;
    for (const Cell& c : tree.level(k)) {
      EXPECT_GT(c.size(), 0u);
      EXPECT_EQ(c.begin, covered);
      covered = c.end;
      const Real left = PartitionTree::CellLeft(static_cast<int>(k), c.index);
      const Real width = PartitionTree::CellWidth(static_cast<int>(k));
      for (std::uint32_t p = c.begin; p < c.end; ++p) {
        EXPECT_GE(set.points[p], left);
        EXPECT_LT(set.points[p], left + width);
      }
      if (k + 1 <= tree.depth()) {
        const auto children = tree.level(k + 1).subspan(c.first_child, c.child_count);
        ASSERT_FALSE(children.empty());
        EXPECT_EQ(children.front().begin, c.begin);
        EXPECT_EQ(children.back().end, c.end);
        for (const Cell& child : children) EXPECT_EQ(child.index / 4, c.index);
      }
    }
    EXPECT_EQ(covered, set.size());
  }
  for (const Cell& c : tree.level(tree.depth())) EXPECT_EQ(c.size(), 1u);
  // Past separation every nonempty parent has exactly one nonempty child.
  const PartitionTree deeper =
      BuildPartition(set, std::min(PartitionTree::kMaxDepth, tree.separation_depth() + 3));
  for (std::size_t k = tree.depth(); k < deeper.depth(); ++k) {
    for (const Cell& c : deeper.level(k)) EXPECT_EQ(c.child_count, 1u);
  }
}

INSTANTIATE_TEST_SUITE_P(Families, PartitionPropertyTest, ::testing::Values(0, 1));

TEST(MeasureTest, Constructors) {
  const auto u = DiscreteMeasure::Uniform(3);
  for (double w : u.weights()) EXPECT_DOUBLE_EQ(w, 1.0 / 3);
  const auto p = DiscreteMeasure::PointMass(3, 0);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], 0.0);
  const auto e = DiscreteMeasure::Explicit({2, 2});
  EXPECT_EQ(e[0], 0.5);
  EXPECT_EQ(e[1], 0.5);
  EXPECT_THROW(DiscreteMeasure::Explicit({1, -1}), InvalidMeasureError);
  EXPECT_THROW(DiscreteMeasure::Explicit({0, 0}), InvalidMeasureError);
  EXPECT_THROW(DiscreteMeasure::PointMass(3, 3), DomainError);
  const IndexSet set = BuildIndexSet(CoefficientSequence::Explicit({0.5}));
  EXPECT_EQ(DiscreteMeasure::PointMassAt(set, 0.25L)[1], 1.0);
}

TEST(MeasureTest, DirichletIsDeterministicAndNormalized) {
  const auto a = DiscreteMeasure::DirichletRandom(64, 11);
  const auto b = DiscreteMeasure::DirichletRandom(64, 11);
  const auto c = DiscreteMeasure::DirichletRandom(64, 12);
  double total = 0;
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_GT(a[i], 0);
    total += a[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NE(a[0], c[0]);
}

TEST(BallMassTest, SpecExamples) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Explicit({0.5}));
  const auto u = DiscreteMeasure::Uniform(2);
  EXPECT_DOUBLE_EQ(BallMass(u, set, 0, 0.1L), 0.5);
  EXPECT_DOUBLE_EQ(BallMass(u, set, 0, 0.25L), 1.0);
  EXPECT_THROW(BallMass(u, set, 0.1L, 0.1L), DomainError);
}

TEST(BallMassTest, MonotoneAndMatchesOracle) {
  const IndexSet set = BuildIndexSet(CoefficientSequence::Power(1.0, 63));
  const auto m = DiscreteMeasure::DirichletRandom(set.size(), 3);
  const auto w = oracle::Weights(m);
  for (std::size_t i = 0; i < set.size(); i += 7) {
    double prev = 0;
    for (int step = 0; step <= 40; ++step) {
      const Real r = set.diameter() * step / 40;
      const double mass = BallMass(m, set, set.points[i], r);
      EXPECT_GE(mass, prev);
      EXPECT_NEAR(mass, static_cast<double>(oracle::NaiveBallMass(w, set.points, set.points[i], r)),
                  1e-14);
      prev = mass;
    }
    EXPECT_NEAR(BallMass(m, set, set.points[i], set.diameter()), 1.0, 1e-14);
  }
}

TEST(RangeMassTest, SumsIndexRange) {
  const auto m = DiscreteMeasure::Explicit({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(RangeMass(m, 1, 3), 0.5);
  EXPECT_DOUBLE_EQ(RangeMass(m, 0, 0), 0.0);
}

}  // namespace
}  // namespace orthochain
