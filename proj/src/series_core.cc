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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "orthochain/rng.h"

namespace orthochain {
namespace {

constexpr double kWeightSumTolerance = 1e-12;

// Sum_{n > start} n^{-s} for s > 1: explicit terms, then the midpoint
// integral for what remains.
double PowerTail(int start, double s) {
  constexpr int kExplicitTerms = 100000;
  long double sum = 0;
  const long double last = static_cast<long double>(start) + kExplicitTerms;
  for (long double n = last; n > start; n -= 1) sum += powl(n, -s);
  sum += powl(last + 0.5L, 1.0L - s) / (s - 1.0L);
  return static_cast<double>(sum);
}

}  // namespace

CoefficientSequence::CoefficientSequence(Family family, double parameter,
                                         std::vector<Real> squares)
    : family_(family), parameter_(parameter), squares_(std::move(squares)) {
  if (squares_.empty()) {
    throw InvalidCoefficientError("at least one coefficient required");
  }
  for (std::size_t n = 0; n < squares_.size(); ++n) {
    if (!(squares_[n] > 0) || !std::isfinite(squares_[n])) {
      std::ostringstream msg;
      msg << "coefficient a_" << n + 1 << " must be positive and finite";
      throw InvalidCoefficientError(msg.str());
    }
  }
}

CoefficientSequence CoefficientSequence::Explicit(std::vector<double> values) {
  if (values.empty()) {
    throw InvalidCoefficientError("at least one coefficient required");
  }
  std::vector<Real> squares;
  squares.reserve(values.size());
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (!(values[n] > 0) || !std::isfinite(values[n])) {
      std::ostringstream msg;
      msg << "coefficient a_" << n + 1 << " = " << values[n]
          << " is not positive";
      throw InvalidCoefficientError(msg.str());
    }
    const Real a = values[n];
    squares.push_back(a * a);
  }
  return CoefficientSequence(Family::kExplicit, 0.0, std::move(squares));
}

CoefficientSequence CoefficientSequence::Power(double exponent, int count) {
  if (count < 1) throw InvalidCoefficientError("at least one coefficient required");
  if (!std::isfinite(exponent)) throw InvalidCoefficientError("power exponent must be finite");
  std::vector<Real> squares(count);
  for (int n = 1; n <= count; ++n) {
    squares[n - 1] = powl(static_cast<Real>(n), -2.0L * exponent);
  }
  return CoefficientSequence(Family::kPower, exponent, std::move(squares));
}

CoefficientSequence CoefficientSequence::Geometric(double ratio, int count) {
  if (count < 1) throw InvalidCoefficientError("at least one coefficient required");
  if (!(ratio > 0) || !std::isfinite(ratio)) {
    throw InvalidCoefficientError("geometric ratio must be positive");
  }
  std::vector<Real> squares(count);
  for (int n = 1; n <= count; ++n) {
    squares[n - 1] = powl(static_cast<Real>(ratio), static_cast<Real>(n));
  }
  return CoefficientSequence(Family::kGeometric, ratio, std::move(squares));
}

Real CoefficientSequence::value(std::size_t n) const {
  return sqrtl(squares_.at(n));
}

Real CoefficientSequence::RawTotal() const {
  Real total = 0;
  for (Real s : squares_) total += s;
  return total;
}

std::optional<double> CoefficientSequence::TailMass() const {
  const int count = static_cast<int>(squares_.size());
  switch (family_) {
    case Family::kExplicit:
      return std::nullopt;
    case Family::kPower: {
      const double s = 2.0 * parameter_;
      if (s <= 1.0) return std::numeric_limits<double>::infinity();
      return PowerTail(count, s);
    }
    case Family::kGeometric:
      if (parameter_ >= 1.0) return std::numeric_limits<double>::infinity();
      return static_cast<double>(powl(parameter_, count + 1.0L) /
                                 (1.0L - parameter_));
  }
  return std::nullopt;
}

std::string CoefficientSequence::Describe() const {
  std::ostringstream out;
  switch (family_) {
    case Family::kExplicit:
      out << "explicit(" << size() << ")";
      break;
    case Family::kPower:
      out << "power(" << parameter_ << "), N=" << size();
      break;
    case Family::kGeometric:
      out << "geometric(" << parameter_ << "), N=" << size();
      break;
  }
  return out.str();
}

std::size_t IndexSet::IndexOf(Real t) const {
  auto it = std::lower_bound(points.begin(), points.end(), t);
  if (it == points.end() || *it != t) {
    std::ostringstream msg;
    msg << "point " << static_cast<double>(t) << " is not in T";
    throw DomainError(msg.str());
  }
  return static_cast<std::size_t>(it - points.begin());
}

IndexSet BuildIndexSet(const CoefficientSequence& coeffs) {
  IndexSet set;
  set.raw_total = coeffs.RawTotal();
  set.scale = set.raw_total < 1 ? Real{1} : (1 - ldexpl(1.0L, -32)) / set.raw_total;
  set.points.reserve(coeffs.size() + 1);
  set.points.push_back(0);
  Real acc = 0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    acc += set.scale * coeffs.squares()[n];
    if (!(acc > set.points.back())) {
      std::ostringstream msg;
      msg << "partial sums " << n << " and " << n + 1
          << " coincide at working precision";
      throw ConsistencyError(msg.str());
    }
    set.points.push_back(acc);
  }
  if (!(set.points.back() < 1)) {
    throw ConsistencyError("normalized partial sums reached 1");
  }
  return set;
}

Real PartitionTree::CellLeft(int k, std::uint64_t index) {
  return ldexpl(static_cast<Real>(index), -2 * k);
}

Real PartitionTree::CellWidth(int k) { return ldexpl(1.0L, -2 * k); }

int SeparationDepth(const IndexSet& set) {
  int depth = 0;
  for (std::size_t i = 1; i < set.points.size(); ++i) {
    const Real a = set.points[i - 1];
    const Real b = set.points[i];
    int k = 1;
    for (; k <= PartitionTree::kMaxDepth; ++k) {
      if (floorl(ldexpl(a, 2 * k)) != floorl(ldexpl(b, 2 * k))) break;
    }
    if (k > PartitionTree::kMaxDepth) {
      throw ConsistencyError(
          "points closer than 4^-32 cannot be separated by the partition");
    }
    depth = std::max(depth, k);
  }
  return depth;
}

PartitionTree BuildPartition(const IndexSet& set, std::optional<int> max_depth) {
  const int separation = SeparationDepth(set);
  int target = separation;
  if (max_depth) {
    if (*max_depth < 0 || *max_depth > PartitionTree::kMaxDepth) {
      throw DomainError("partition depth must lie in [0, 32]");
    }
    target = *max_depth;
  }
  PartitionTree tree;
  tree.separation_depth_ = separation;
  tree.point_count_ = set.size();
  tree.levels_.push_back(
      {Cell{0, 0, static_cast<std::uint32_t>(set.size()), 0, 0}});
  for (int k = 1; k <= target; ++k) {
    std::vector<Cell> next;
    for (Cell& parent : tree.levels_.back()) {
      parent.first_child = static_cast<std::uint32_t>(next.size());
      auto cursor = set.points.begin() + parent.begin;
      const auto stop = set.points.begin() + parent.end;
      for (std::uint64_t j = 0; j < 4; ++j) {
        const std::uint64_t index = 4 * parent.index + j;
        const Real upper = ldexpl(static_cast<Real>(index) + 1, -2 * k);
        const auto child_end = std::lower_bound(cursor, stop, upper);
        if (child_end != cursor) {
          next.push_back(Cell{
              index,
              static_cast<std::uint32_t>(cursor - set.points.begin()),
              static_cast<std::uint32_t>(child_end - set.points.begin()), 0, 0});
        }
        cursor = child_end;
      }
      parent.child_count =
          static_cast<std::uint32_t>(next.size()) - parent.first_child;
    }
    tree.levels_.push_back(std::move(next));
  }
  return tree;
}

DiscreteMeasure DiscreteMeasure::Uniform(std::size_t n) {
  if (n == 0) throw InvalidMeasureError("measure needs at least one point");
  return DiscreteMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::PointMass(std::size_t n, std::size_t at) {
  if (at >= n) throw DomainError("point mass location outside T");
  std::vector<double> w(n, 0.0);
  w[at] = 1.0;
  return DiscreteMeasure(std::move(w));
}

DiscreteMeasure DiscreteMeasure::PointMassAt(const IndexSet& set, Real t) {
  return PointMass(set.size(), set.IndexOf(t));
}

DiscreteMeasure DiscreteMeasure::Explicit(std::vector<double> weights) {
  if (weights.empty()) throw InvalidMeasureError("measure needs at least one point");
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) {
      throw InvalidMeasureError("measure weights must be nonnegative and finite");
    }
    total += w;
  }
  if (!(total > 0)) throw InvalidMeasureError("measure weights sum to zero");
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    for (double& w : weights) w /= total;
  }
  return DiscreteMeasure(std::move(weights));
}

DiscreteMeasure DiscreteMeasure::DirichletRandom(std::size_t n,
                                                 std::uint64_t seed) {
  if (n == 0) throw InvalidMeasureError("measure needs at least one point");
  auto rng = MakeStream(seed, StreamDomain::kMeasureDraw, n);
  std::exponential_distribution<double> unit(1.0);
  std::vector<double> w(n);
  double total = 0;
  for (double& x : w) {
    x = unit(rng);
    total += x;
  }
  for (double& x : w) x /= total;
  return DiscreteMeasure(std::move(w));
}

double BallMass(const DiscreteMeasure& m, const IndexSet& set, Real t, Real r) {
  const std::size_t center = set.IndexOf(t);
  if (!(r >= 0)) throw DomainError("ball radius must be nonnegative");
  if (m.size() != set.size()) throw InvalidMeasureError("measure size differs from |T|");
  const Real c = set.points[center];
  double mass = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (fabsl(set.points[i] - c) <= r) mass += m[i];
  }
  return mass;
}

double RangeMass(const DiscreteMeasure& m, std::uint32_t begin,
                 std::uint32_t end) {
  double mass = 0;
  for (std::uint32_t i = begin; i < end; ++i) mass += m[i];
  return mass;
}

}  // namespace orthochain
