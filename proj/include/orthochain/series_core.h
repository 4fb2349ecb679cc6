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

#ifndef ORTHOCHAIN_SERIES_CORE_H_
#define ORTHOCHAIN_SERIES_CORE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orthochain/errors.h"

namespace orthochain {

// Coordinates on T. Extended precision is needed because partial sums of
// geometric families approach 1 closer than a double can resolve.
using Real = long double;

// Positive coefficients a_1..a_N, stored through their squares so that
// families like a_n^2 = q^n are represented exactly.
class CoefficientSequence {
 public:
  enum class Family { kExplicit, kPower, kGeometric };

  static CoefficientSequence Explicit(std::vector<double> values);
  // a_n = n^{-exponent}.
  static CoefficientSequence Power(double exponent, int count);
  // a_n = ratio^{n/2}, i.e. a_n^2 = ratio^n.
  static CoefficientSequence Geometric(double ratio, int count);

  Family family() const { return family_; }
  double parameter() const { return parameter_; }
  std::size_t size() const { return squares_.size(); }
  std::span<const Real> squares() const { return squares_; }
  Real value(std::size_t n) const;  // a_{n+1}, zero-based
  Real RawTotal() const;

  // Sum of a_n^2 over n > N for named families; +inf when the full series
  // diverges. Empty for explicit lists.
  std::optional<double> TailMass() const;

  std::string Describe() const;

 private:
  CoefficientSequence(Family family, double parameter, std::vector<Real> squares);

  Family family_;
  double parameter_;
  std::vector<Real> squares_;
};

struct IndexSet {
  std::vector<Real> points;  // t_0 = 0 < t_1 < ... < t_N < 1
  Real scale = 1;            // t_m = scale * sum_{n<=m} a_n^2
  Real raw_total = 0;

  std::size_t size() const { return points.size(); }
  Real diameter() const { return points.back() - points.front(); }
  // Index of the point equal to `t`; throws DomainError if t is not in T.
  std::size_t IndexOf(Real t) const;
};

IndexSet BuildIndexSet(const CoefficientSequence& coeffs);

// Nonempty cell A^{(k)}_index = [index 4^-k, (index+1) 4^-k) ∩ T, as the
// half-open range [begin, end) into IndexSet::points.
struct Cell {
  std::uint64_t index = 0;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  // Children are stored contiguously in the next level.
  std::uint32_t first_child = 0;
  std::uint32_t child_count = 0;

  std::uint32_t size() const { return end - begin; }
};

class PartitionTree {
 public:
  static constexpr int kMaxDepth = 32;

  std::size_t depth() const { return levels_.size() - 1; }
  int separation_depth() const { return separation_depth_; }
  std::span<const Cell> level(std::size_t k) const { return levels_.at(k); }
  std::size_t point_count() const { return point_count_; }

  static Real CellLeft(int k, std::uint64_t index);
  static Real CellWidth(int k);

 private:
  friend PartitionTree BuildPartition(const IndexSet&, std::optional<int>);

  std::vector<std::vector<Cell>> levels_;
  int separation_depth_ = 0;
  std::size_t point_count_ = 0;
};

// Smallest k at which every cell holds at most one point, computed from
// adjacent pairs without building the tree.
int SeparationDepth(const IndexSet& set);

// max_depth empty means "auto": stop at the separation depth.
PartitionTree BuildPartition(const IndexSet& set,
                             std::optional<int> max_depth = std::nullopt);

class DiscreteMeasure {
 public:
  static DiscreteMeasure Uniform(std::size_t n);
  static DiscreteMeasure PointMass(std::size_t n, std::size_t at);
  static DiscreteMeasure PointMassAt(const IndexSet& set, Real t);
  // Normalizes; rejects negative entries and zero total.
  static DiscreteMeasure Explicit(std::vector<double> weights);
  // Flat Dirichlet draw (normalized unit exponentials), deterministic in seed.
  static DiscreteMeasure DirichletRandom(std::size_t n, std::uint64_t seed);

  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::size_t size() const { return weights_.size(); }

 private:
  explicit DiscreteMeasure(std::vector<double> w) : weights_(std::move(w)) {}
  std::vector<double> weights_;
};

// Mass of the closed ball {s in T : |s - t| <= r}.
double BallMass(const DiscreteMeasure& m, const IndexSet& set, Real t, Real r);

// Mass of the index range [begin, end), summed left to right.
double RangeMass(const DiscreteMeasure& m, std::uint32_t begin,
                 std::uint32_t end);

}  // namespace orthochain

#endif  // ORTHOCHAIN_SERIES_CORE_H_
