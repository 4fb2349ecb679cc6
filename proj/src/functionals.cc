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

#include "orthochain/functionals.h"

#include <cmath>
#include <limits>

namespace orthochain {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckSizes(const DiscreteMeasure& m, const IndexSet& set) {
  if (m.size() != set.size()) {
    throw InvalidMeasureError("measure size differs from |T|");
  }
}

void CheckTreeDepth(const PartitionTree& tree) {
  if (static_cast<int>(tree.depth()) < tree.separation_depth()) {
    throw DomainError("partition tree stops before the separation depth");
  }
}

// Walks the points of T outward from `center` in order of distance, handing
// each distinct distance and the indices found at it to `visit`.
template <typename Visit>
void WalkByDistance(const IndexSet& set, std::size_t center, Visit&& visit) {
  const auto& t = set.points;
  std::ptrdiff_t left = static_cast<std::ptrdiff_t>(center) - 1;
  std::size_t right = center + 1;
  const Real far = std::numeric_limits<Real>::infinity();
  while (left >= 0 || right < t.size()) {
    const Real dl = left >= 0 ? t[center] - t[left] : far;
    const Real dr = right < t.size() ? t[right] - t[center] : far;
    const Real d = dl < dr ? dl : dr;
    std::size_t group[2];
    int count = 0;
    if (dl == d) group[count++] = static_cast<std::size_t>(left--);
    if (dr == d) group[count++] = right++;
    visit(d, group, count);
  }
}

}  // namespace

bool StrongValue::infinite() const { return std::isinf(value); }

double StrongFunctionalAt(const DiscreteMeasure& m, const IndexSet& set,
                          std::size_t i) {
  CheckSizes(m, set);
  if (i >= set.size()) throw DomainError("point index outside T");
  const Real diameter = set.diameter();
  if (diameter == 0) return 0.0;
  Real integral = 0;
  Real mass = m[i];
  Real prev = 0;
  bool diverges = false;
  auto piece = [&](Real upto) {
    const Real len = sqrtl(upto) - sqrtl(prev);
    if (len > 0) {
      if (mass <= 0) {
        diverges = true;
      } else {
        integral += len / sqrtl(mass);
      }
    }
  };
  WalkByDistance(set, i, [&](Real d, const std::size_t* group, int count) {
    piece(d);
    for (int g = 0; g < count; ++g) mass += m[group[g]];
    prev = d;
  });
  piece(diameter);
  return diverges ? kInf : static_cast<double>(integral);
}

double StrongFunctionalAtPoint(const DiscreteMeasure& m, const IndexSet& set,
                               Real t) {
  return StrongFunctionalAt(m, set, set.IndexOf(t));
}

std::vector<double> StrongGradientAt(const DiscreteMeasure& m,
                                     const IndexSet& set, std::size_t i) {
  CheckSizes(m, set);
  if (i >= set.size()) throw DomainError("point index outside T");
  std::vector<double> grad(set.size(), 0.0);
  const Real diameter = set.diameter();
  if (diameter == 0) return grad;
  if (!(m[i] > 0)) throw DomainError("gradient undefined where the integral diverges");

  // coeff[p] is d(piece p)/d(mass) = -len/2 * mass^{-3/2}; a weight joining
  // the ball before piece p feels every coefficient from p on.
  std::vector<Real> coeff;
  std::vector<std::size_t> joined(set.size(), 0);
  Real mass = m[i];
  Real prev = 0;
  auto piece = [&](Real upto) {
    const Real len = sqrtl(upto) - sqrtl(prev);
    coeff.push_back(len > 0 ? -0.5L * len / (mass * sqrtl(mass)) : 0.0L);
  };
  WalkByDistance(set, i, [&](Real d, const std::size_t* group, int count) {
    piece(d);
    for (int g = 0; g < count; ++g) {
      mass += m[group[g]];
      joined[group[g]] = coeff.size();
    }
    prev = d;
  });
  piece(diameter);
  std::vector<Real> suffix(coeff.size() + 1, 0.0L);
  for (std::size_t p = coeff.size(); p-- > 0;) suffix[p] = suffix[p + 1] + coeff[p];
  for (std::size_t s = 0; s < set.size(); ++s) {
    grad[s] = static_cast<double>(suffix[joined[s]]);
  }
  return grad;
}

StrongValue StrongFunctional(const DiscreteMeasure& m, const IndexSet& set) {
  StrongValue best{-1.0, 0};
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double v = StrongFunctionalAt(m, set, i);
    if (v > best.value) best = {v, i};
    if (std::isinf(v)) break;
  }
  return best;
}

double WeakFunctional(const DiscreteMeasure& m, const IndexSet& set) {
  double total = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (m[i] > 0) total += m[i] * StrongFunctionalAt(m, set, i);
  }
  return total;
}

double PointDyadicSeries(const DiscreteMeasure& m, const IndexSet& set,
                         std::size_t i) {
  CheckSizes(m, set);
  if (i >= set.size()) throw DomainError("point index outside T");
  const auto& t = set.points;
  Real nearest = std::numeric_limits<Real>::infinity();
  if (i > 0) nearest = t[i] - t[i - 1];
  if (i + 1 < t.size()) nearest = std::min(nearest, t[i + 1] - t[i]);
  long double sum = 0;
  for (int k = 1;; ++k) {
    const Real radius = ldexpl(1.0L, -2 * k);
    if (radius < nearest) {
      if (!(m[i] > 0)) return kInf;
      return static_cast<double>(sum + ldexpl(1.0L, -(k - 1)) / sqrtl(m[i]));
    }
    double mass = 0;
    for (std::size_t s = 0; s < t.size(); ++s) {
      if (fabsl(t[s] - t[i]) <= radius) mass += m[s];
    }
    if (!(mass > 0)) return kInf;
    sum += ldexpl(1.0L, -k) / sqrtl(mass);
  }
}

double DyadicBound(const DiscreteMeasure& m, const PartitionTree& tree) {
  if (m.size() != tree.point_count()) {
    throw InvalidMeasureError("measure size differs from |T|");
  }
  CheckTreeDepth(tree);
  const int sep = tree.separation_depth();
  long double total = 0;
  for (int k = 1; k <= sep; ++k) {
    long double level = 0;
    for (const Cell& c : tree.level(k)) level += sqrtl(RangeMass(m, c.begin, c.end));
    total += ldexpl(level, -k);
  }
  long double singles = 0;
  for (double w : m.weights()) singles += sqrtl(w);
  return static_cast<double>(total + ldexpl(singles, -sep));
}

RademacherMenchovResult RademacherMenchov(const CoefficientSequence& coeffs) {
  RademacherMenchovResult out;
  long double total = 0;
  out.cumulative.reserve(coeffs.size());
  for (std::size_t n = 1; n <= coeffs.size(); ++n) {
    const long double lg = logl(static_cast<long double>(n) + 1);
    total += coeffs.squares()[n - 1] * lg * lg;
    out.cumulative.push_back(static_cast<double>(total));
  }
  out.total = static_cast<double>(total);
  return out;
}

unsigned GoodChildren(const std::array<double, 4>& child_mass,
                      const std::array<bool, 4>& nonempty) {
  const double parent = child_mass[0] + child_mass[1] + child_mass[2] + child_mass[3];
  if (!(parent > 0)) return 0;
  const double even_pair = child_mass[0] + child_mass[2];
  const double odd_pair = child_mass[1] + child_mass[3];
  unsigned mask = 0;
  for (int j = 0; j < 4; ++j) {
    if (!nonempty[j]) continue;
    const double pair = (j % 2 == 0) ? even_pair : odd_pair;
    if (parent / 32 <= child_mass[j] && child_mass[j] <= pair / 2) {
      mask |= 1u << j;
    }
  }
  return mask;
}

bool GoodIndexTable::Contains(int k, std::uint64_t index) const {
  if (k < 1 || k > static_cast<int>(levels.size())) return false;
  for (std::uint64_t g : levels[k - 1].good) {
    if (g == index) return true;
  }
  return false;
}

GoodIndexTable ClassifyGoodIndices(const DiscreteMeasure& m,
                                   const PartitionTree& tree) {
  if (m.size() != tree.point_count()) {
    throw InvalidMeasureError("measure size differs from |T|");
  }
  GoodIndexTable table;
  for (std::size_t k = 1; k <= tree.depth(); ++k) {
    GoodIndexLevel level;
    level.k = static_cast<int>(k);
    const auto parents = tree.level(k - 1);
    const auto children = tree.level(k);
    level.nonempty_cells = children.size();
    for (const Cell& parent : parents) {
      std::array<double, 4> mass{};
      std::array<bool, 4> nonempty{};
      for (std::uint32_t c = 0; c < parent.child_count; ++c) {
        const Cell& child = children[parent.first_child + c];
        const int j = static_cast<int>(child.index & 3u);
        mass[j] = RangeMass(m, child.begin, child.end);
        nonempty[j] = true;
      }
      const unsigned mask = GoodChildren(mass, nonempty);
      for (std::uint32_t c = 0; c < parent.child_count; ++c) {
        const Cell& child = children[parent.first_child + c];
        const int j = static_cast<int>(child.index & 3u);
        const double root = std::sqrt(mass[j]);
        level.full_sum += root;
        if (mask & (1u << j)) {
          level.filtered_sum += root;
          level.good.push_back(child.index);
        }
      }
    }
    if (!level.good.empty()) table.last_good_level = level.k;
    table.filtered_total += std::ldexp(level.filtered_sum, -level.k);
    table.levels.push_back(std::move(level));
  }
  return table;
}

double FilteredSum(const GoodIndexTable& table, int max_level) {
  double total = 0;
  for (const auto& level : table.levels) {
    if (level.k > max_level) break;
    total += std::ldexp(level.filtered_sum, -level.k);
  }
  return total;
}

double FilteredBound(const GoodIndexTable& table) {
  return (kFilterConstant + table.filtered_total) / (1.0 - kFilterConstant / 2);
}

double FilteredBound(const DiscreteMeasure& m, const PartitionTree& tree) {
  CheckTreeDepth(tree);
  return FilteredBound(ClassifyGoodIndices(m, tree));
}

FunctionalReport Evaluate(const CoefficientSequence& coeffs,
                          const IndexSet& set, const PartitionTree& tree,
                          const DiscreteMeasure& m) {
  CheckSizes(m, set);
  CheckTreeDepth(tree);
  FunctionalReport r;
  r.strong = StrongFunctional(m, set);
  r.strong_argmax_point = set.points[r.strong.argmax];
  r.weak_value = WeakFunctional(m, set);
  r.dyadic_bound_value = DyadicBound(m, tree);
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (m[i] > 0) r.weighted_point_dyadic += m[i] * PointDyadicSeries(m, set, i);
  }
  r.good = ClassifyGoodIndices(m, tree);
  r.filtered_sum = r.good.filtered_total;
  r.filtered_bound_value = FilteredBound(r.good);
  r.rm = RademacherMenchov(coeffs);
  r.separation_depth = tree.separation_depth();
  for (const auto& level : r.good.levels) {
    r.per_level_full.push_back(std::ldexp(level.full_sum, -level.k));
  }
  r.tail_mass = coeffs.TailMass();
  r.main_constant_symbolic =
      "K = (1/(1 - L/2)) * (L + 64 * sqrt(B)), L = 2^(1/2) * 5/4, "
      "B = sup over orthogonal X of E sup_t (X(t) - X(0))^2 (unknown)";
  return r;
}

}  // namespace orthochain
