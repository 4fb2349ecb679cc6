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

#ifndef ORTHOCHAIN_FUNCTIONALS_H_
#define ORTHOCHAIN_FUNCTIONALS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "orthochain/series_core.h"

namespace orthochain {

// L = 2^{1/2} * 5/4 from the good-index filtering argument.
inline constexpr double kFilterConstant = 1.41421356237309504880 * 1.25;

// Exact value of  ∫_0^{sqrt D(T)} m(B(t, r^2))^{-1/2} dr  at point index i.
// The integrand is a step function of r with breaks at r = sqrt(d) for each
// distance d from t to T, so the integral is a finite sum. Returns +inf when
// m({t}) = 0 and D(T) > 0.
double StrongFunctionalAt(const DiscreteMeasure& m, const IndexSet& set,
                          std::size_t i);
double StrongFunctionalAtPoint(const DiscreteMeasure& m, const IndexSet& set,
                               Real t);

// Partial derivatives of StrongFunctionalAt(i) with respect to each raw
// weight (no renormalization). Requires a finite value at i.
std::vector<double> StrongGradientAt(const DiscreteMeasure& m,
                                     const IndexSet& set, std::size_t i);

struct StrongValue {
  double value = 0;
  std::size_t argmax = 0;  // smallest maximizing index
  bool infinite() const;
};

StrongValue StrongFunctional(const DiscreteMeasure& m, const IndexSet& set);

// Sum_t w_t * StrongFunctionalAt(t), zero-weight terms dropped.
double WeakFunctional(const DiscreteMeasure& m, const IndexSet& set);

// Sum_{k>=1} 2^-k m(B(t, 4^-k))^{-1/2}, summed in closed form once the balls
// shrink to {t}. This is the per-point majorant of StrongFunctionalAt.
double PointDyadicSeries(const DiscreteMeasure& m, const IndexSet& set,
                         std::size_t i);

// Sum_{k>=1} 2^-k Sum_i m(A^(k)_i)^{1/2}, including the geometric tail past
// the separation depth. The tree must reach the separation depth.
double DyadicBound(const DiscreteMeasure& m, const PartitionTree& tree);

struct RademacherMenchovResult {
  double total = 0;
  std::vector<double> cumulative;  // after each n
  std::string log_base = "e";
};

// Sum_{n<=N} a_n^2 ln^2(n+1) on the raw (unscaled) coefficients.
RademacherMenchovResult RademacherMenchov(const CoefficientSequence& coeffs);

// Balance test for the four children of one parent. `child_mass[j]` is the
// mass of A^(k)_{4i+j}; `nonempty[j]` whether the cell meets T. Returns a
// bitmask over j. Parents of zero mass have no good children.
unsigned GoodChildren(const std::array<double, 4>& child_mass,
                      const std::array<bool, 4>& nonempty);

struct GoodIndexLevel {
  int k = 0;
  std::vector<std::uint64_t> good;  // cell indices 4i+j in I(k)
  std::size_t nonempty_cells = 0;
  double full_sum = 0;      // Sum_i m(A^(k)_i)^{1/2}
  double filtered_sum = 0;  // same, restricted to I(k)
};

struct GoodIndexTable {
  std::vector<GoodIndexLevel> levels;  // k = 1..tree depth
  // Sum_k 2^-k filtered_sum over the levels present.
  double filtered_total = 0;
  // Last level with I(k) nonempty, 0 if none.
  int last_good_level = 0;

  bool Contains(int k, std::uint64_t index) const;
};

GoodIndexTable ClassifyGoodIndices(const DiscreteMeasure& m,
                                   const PartitionTree& tree);

// Partial filtered sum Sum_{k=1}^{max_level} 2^-k Sum m(A)^{1/2} 1_{I(k)}.
double FilteredSum(const GoodIndexTable& table, int max_level);

// (1/(1 - L/2)) (L + filtered_total).
double FilteredBound(const GoodIndexTable& table);
double FilteredBound(const DiscreteMeasure& m, const PartitionTree& tree);

struct FunctionalReport {
  StrongValue strong;
  Real strong_argmax_point = 0;
  double weak_value = 0;
  double dyadic_bound_value = 0;
  double weighted_point_dyadic = 0;  // Sum_t w_t PointDyadicSeries(t)
  double filtered_sum = 0;
  double filtered_bound_value = 0;
  RademacherMenchovResult rm;
  double L = kFilterConstant;
  GoodIndexTable good;
  std::vector<double> per_level_full;  // 2^-k weighted contributions
  int separation_depth = 0;
  std::optional<double> tail_mass;
  std::string main_constant_symbolic;
};

FunctionalReport Evaluate(const CoefficientSequence& coeffs,
                          const IndexSet& set, const PartitionTree& tree,
                          const DiscreteMeasure& m);

}  // namespace orthochain

#endif  // ORTHOCHAIN_FUNCTIONALS_H_
