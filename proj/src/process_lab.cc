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

#include "orthochain/process_lab.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace orthochain {
namespace {

double Uniform01(Philox4x32& rng) {
  return std::generate_canonical<double, 64>(rng);
}

double Sign(Philox4x32& rng) { return (rng() >> 63) ? 1.0 : -1.0; }

}  // namespace

GeneratorKind ParseGeneratorKind(const std::string& name) {
  if (name == "gaussian") return GeneratorKind::kGaussian;
  if (name == "rademacher") return GeneratorKind::kRademacher;
  if (name == "trig" || name == "trigonometric") return GeneratorKind::kTrigonometric;
  throw DomainError("unknown generator '" + name + "'");
}

std::string GeneratorName(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kGaussian:
      return "gaussian";
    case GeneratorKind::kRademacher:
      return "rademacher";
    case GeneratorKind::kTrigonometric:
      return "trig";
  }
  return "gaussian";
}

void OrthonormalGenerator::Fill(Philox4x32& rng, std::span<double> out) const {
  switch (kind) {
    case GeneratorKind::kGaussian: {
      std::normal_distribution<double> normal;
      for (double& v : out) v = normal(rng);
      break;
    }
    case GeneratorKind::kRademacher:
      for (double& v : out) v = Sign(rng);
      break;
    case GeneratorKind::kTrigonometric: {
      const double omega = Uniform01(rng);
      for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = std::numbers::sqrt2 *
                 std::cos(2 * std::numbers::pi * static_cast<double>(n + 1) * omega);
      }
      break;
    }
  }
}

MCEstimate Summarize(std::span<const double> samples, std::uint64_t seed) {
  MCEstimate e;
  e.paths = samples.size();
  e.seed = seed;
  if (samples.empty()) return e;
  long double sum = 0;
  for (double v : samples) sum += v;
  const long double mean = sum / samples.size();
  long double ss = 0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  e.mean = static_cast<double>(mean);
  if (samples.size() > 1) {
    const long double var = ss / (samples.size() - 1);
    e.std_error = static_cast<double>(sqrtl(var / samples.size()));
  }
  return e;
}

MCEstimate SimulateSupSquare(const CoefficientSequence& coeffs,
                             const OrthonormalGenerator& gen,
                             std::size_t paths, std::uint64_t seed,
                             int workers) {
  if (paths < 100) throw DomainError("at least 100 paths required");
  std::vector<double> a(coeffs.size());
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = static_cast<double>(coeffs.value(n));
  std::vector<double> values(paths);
  ParallelFor(paths, workers, [&](std::size_t path) {
    auto rng = MakeStream(seed, StreamDomain::kPaths, path);
    std::vector<double> phi(a.size());
    gen.Fill(rng, phi);
    double partial = 0;
    double best = 0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      partial += a[n] * phi[n];
      best = std::max(best, partial * partial);
    }
    values[path] = best;
  });
  return Summarize(values, seed);
}

std::array<double, 5> SSkeleton(const std::array<double, 4>& z) {
  const double total = z[0] + z[1] + z[2] + z[3];
  std::array<double, 5> s{};
  double prefix = 0;
  for (int j = 1; j <= 4; ++j) {
    prefix += z[j - 1];
    s[j] = prefix - j * total / 4;
  }
  s[4] = 0;
  return s;
}

SkeletonLaw BuildSkeletonLawFor(const std::array<double, 4>& child_mass, int n) {
  const double parent = child_mass[0] + child_mass[1] + child_mass[2] + child_mass[3];
  if (!(parent > 0)) throw DomainError("parent mass must be positive");
  SkeletonLaw law;
  for (int j = 0; j < 4; ++j) {
    if (child_mass[j] < 0) throw InvalidMeasureError("child mass must be nonnegative");
    law.tau_prob[j] = child_mass[j] / parent;
  }
  if (n != 3 && n != 2) return law;
  const int plus = n == 3 ? 0 : 3;
  const int minus = n == 3 ? 2 : 1;
  const double pa = law.tau_prob[plus];
  const double pb = law.tau_prob[minus];
  if (!(pa > 0) || !(pb > 0)) {
    law.degenerate_fallback = true;
    return law;
  }
  law.measurable = n;
  law.plus_child = plus;
  law.minus_child = minus;
  law.x = std::sqrt(pb / (pa * (pa + pb)));
  law.y = -law.x * pa / pb;
  return law;
}

SkeletonLaw BuildSkeletonLaw(const std::array<double, 4>& child_mass,
                             unsigned good_mask) {
  if (good_mask & 0b0101u) return BuildSkeletonLawFor(child_mass, 3);
  if (good_mask & 0b1010u) return BuildSkeletonLawFor(child_mass, 2);
  return BuildSkeletonLawFor(child_mass, -1);
}

SkeletonDraw SampleSkeleton(const SkeletonLaw& law, Philox4x32& rng) {
  SkeletonDraw draw;
  const double u = Uniform01(rng);
  double acc = 0;
  int last_positive = 0;
  draw.tau = -1;
  for (int j = 0; j < 4; ++j) {
    if (law.tau_prob[j] <= 0) continue;
    last_positive = j;
    acc += law.tau_prob[j];
    if (draw.tau < 0 && u < acc) draw.tau = j;
  }
  if (draw.tau < 0) draw.tau = last_positive;
  for (int j = 0; j < 4; ++j) {
    if (j == law.measurable) {
      draw.z[j] = draw.tau == law.plus_child    ? law.x
                  : draw.tau == law.minus_child ? law.y
                                                : 0.0;
    } else {
      draw.z[j] = Sign(rng);
    }
  }
  return draw;
}

SkeletonVariables BuildSkeletonVariables(const std::array<double, 4>& child_mass,
                                         unsigned good_mask, std::uint64_t seed) {
  SkeletonVariables vars;
  vars.law = BuildSkeletonLaw(child_mass, good_mask);
  auto rng = MakeStream(seed, StreamDomain::kSkeleton, 0);
  vars.draw = SampleSkeleton(vars.law, rng);
  return vars;
}

SkeletonMoments EnumerateSkeletonMoments(const SkeletonLaw& law) {
  int free_idx[4];
  int free_count = 0;
  for (int j = 0; j < 4; ++j) {
    if (j != law.measurable) free_idx[free_count++] = j;
  }
  // Without a tau-measurable variable the moments reported are those of Z_3.
  const int watched = law.measurable >= 0 ? law.measurable : 3;
  const long double sign_prob = ldexpl(1.0L, -free_count);
  long double mean = 0, second = 0;
  std::array<long double, 4> level{}, step{}, tau_mass{};
  for (int tau = 0; tau < 4; ++tau) {
    const long double p = law.tau_prob[tau];
    if (p <= 0) continue;
    for (int bits = 0; bits < (1 << free_count); ++bits) {
      std::array<double, 4> z{};
      if (law.measurable >= 0) {
        z[law.measurable] = tau == law.plus_child    ? law.x
                            : tau == law.minus_child ? law.y
                                                     : 0.0;
      }
      for (int f = 0; f < free_count; ++f) {
        z[free_idx[f]] = (bits >> f) & 1 ? 1.0 : -1.0;
      }
      const long double w = p * sign_prob;
      const auto s = SSkeleton(z);
      mean += w * z[watched];
      second += w * z[watched] * z[watched];
      level[tau] += w * s[tau];
      step[tau] += w * (s[tau + 1] - s[tau]);
      tau_mass[tau] += w;
    }
  }
  SkeletonMoments out;
  out.mean_zn = static_cast<double>(mean);
  out.second_zn = static_cast<double>(second);
  long double v = 0;
  for (int j = 0; j < 4; ++j) {
    v += level[j] - std::max(-step[j], 0.0L);
    out.tau_prob[j] = static_cast<double>(tau_mass[j]);
  }
  out.v = static_cast<double>(v);
  return out;
}

double PairGainClosedForm(const SkeletonLaw& law) {
  if (law.measurable < 0) return 0.0;
  const double pa = law.tau_prob[law.plus_child];
  const double pb = law.tau_prob[law.minus_child];
  return 0.25 * std::sqrt(pa * pb / (pa + pb));
}

double BridgeCovariance(Real s_local, Real t_local, int k) {
  const Real scale = ldexpl(1.0L, 2 * k);
  return static_cast<double>(std::min(s_local, t_local) - scale * s_local * t_local);
}

void BridgeLeafSample(Real left, int k, std::span<const Real> points,
                      Philox4x32& rng, std::span<double> out) {
  const Real width = PartitionTree::CellWidth(k);
  std::normal_distribution<double> normal;
  Real prev_u = 0;
  Real prev_value = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Real u = points[i] - left;
    if (u < 0 || u >= width) throw DomainError("bridge point outside its cell");
    if (u < prev_u) throw DomainError("bridge points must be sorted");
    if (u == 0) {
      out[i] = 0;
      continue;
    }
    const Real rest = width - prev_u;
    const Real mean = prev_value * (width - u) / rest;
    const Real var = (u - prev_u) * (width - u) / rest;
    const Real value = mean + sqrtl(var) * normal(rng);
    out[i] = static_cast<double>(value);
    prev_u = u;
    prev_value = value;
  }
}

BridgeProcess::BridgeProcess(std::vector<Real> points, int k,
                             std::uint64_t cell_index)
    : points_(std::move(points)), k_(k), left_(PartitionTree::CellLeft(k, cell_index)) {
  if (!std::is_sorted(points_.begin(), points_.end())) {
    throw DomainError("bridge points must be sorted");
  }
  const Real width = PartitionTree::CellWidth(k_);
  for (Real p : points_) {
    if (p < left_ || p - left_ >= width) throw DomainError("bridge point outside its cell");
  }
}

void BridgeProcess::Sample(Philox4x32& rng, std::span<double> out) const {
  BridgeLeafSample(left_, k_, points_, rng, out);
}

double BridgeProcess::IncrementSecondMoment(std::size_t a, std::size_t b) const {
  const Real d = fabsl(points_[a] - points_[b]);
  return static_cast<double>(d * (1 - ldexpl(d, 2 * k_)));
}

AdversarialProcess::AdversarialProcess(const IndexSet& set,
                                       const PartitionTree& tree,
                                       const DiscreteMeasure& m, int base_depth)
    : set_(set), tree_(tree), base_depth_(base_depth) {
  if (base_depth < 0) throw DomainError("base depth must be nonnegative");
  if (m.size() != set.size() || tree.point_count() != set.size()) {
    throw InvalidMeasureError("measure, tree and T sizes differ");
  }
  if (base_depth_ > static_cast<int>(tree.depth())) {
    base_depth_ = static_cast<int>(tree.depth());
    clipped_ = true;
  }
  for (int k = 1; k <= base_depth_; ++k) {
    const auto parents = tree.level(k - 1);
    const auto children = tree.level(k);
    std::vector<SkeletonLaw> laws;
    laws.reserve(parents.size());
    long double gain = 0;
    for (const Cell& parent : parents) {
      std::array<double, 4> mass{};
      std::array<bool, 4> nonempty{};
      for (std::uint32_t c = 0; c < parent.child_count; ++c) {
        const Cell& child = children[parent.first_child + c];
        const int j = static_cast<int>(child.index & 3u);
        mass[j] = RangeMass(m, child.begin, child.end);
        nonempty[j] = true;
      }
      const double parent_mass = mass[0] + mass[1] + mass[2] + mass[3];
      if (parent_mass > 0) {
        laws.push_back(BuildSkeletonLaw(mass, GoodChildren(mass, nonempty)));
        gain += std::sqrt(parent_mass) * EnumerateSkeletonMoments(laws.back()).v;
      } else {
        // Never selected by tau; kept so indices line up with the tree.
        laws.emplace_back();
      }
    }
    skeleton_gain_ += static_cast<double>(ldexpl(gain, -k));
    laws_.push_back(std::move(laws));
  }
}

void AdversarialProcess::Sample(Philox4x32& rng, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& t = set_.points;
  std::size_t pos = 0;
  const Cell* cell = &tree_.level(0)[0];
  long double scale = 1;
  for (int k = 1; k <= base_depth_; ++k) {
    const SkeletonLaw& law = laws_[k - 1][pos];
    const SkeletonDraw draw = SampleSkeleton(law, rng);
    const auto s = SSkeleton(draw.z);
    const auto children = tree_.level(k);
    const Real fine = ldexpl(1.0L, k);
    const Real coarse = ldexpl(1.0L, -k);
    std::size_t next = cell->first_child;
    for (std::uint32_t c = 0; c < cell->child_count; ++c) {
      const Cell& child = children[cell->first_child + c];
      const int j = static_cast<int>(child.index & 3u);
      const Real left = PartitionTree::CellLeft(k, child.index);
      const Real slope = s[j + 1] - s[j];
      for (std::uint32_t p = child.begin; p < child.end; ++p) {
        out[p] += static_cast<double>(scale * (coarse * s[j] + fine * (t[p] - left) * slope));
      }
      if (j == draw.tau) next = cell->first_child + c;
    }
    scale /= sqrtl(law.tau_prob[draw.tau]);
    pos = next;
    cell = &children[next];
  }
  std::vector<double> leaf(cell->size());
  BridgeLeafSample(PartitionTree::CellLeft(base_depth_, cell->index), base_depth_,
                   std::span<const Real>(t).subspan(cell->begin, cell->size()), rng,
                   leaf);
  for (std::uint32_t p = 0; p < cell->size(); ++p) {
    out[cell->begin + p] += static_cast<double>(scale * leaf[p]);
  }
}

double AdversarialProcess::IncrementSecondMoment(std::size_t a, std::size_t b) const {
  const Real d = fabsl(set_.points[a] - set_.points[b]);
  return static_cast<double>(d * (1 - d));
}

void OrthogonalLift::Sample(Philox4x32& rng, std::span<double> out) const {
  base_.Sample(rng, out);
  std::normal_distribution<double> normal;
  const double z = normal(rng);
  const auto t = base_.points();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += static_cast<double>(t[i]) * z;
}

double OrthogonalLift::IncrementSecondMoment(std::size_t a, std::size_t b) const {
  const auto t = base_.points();
  const Real d = t[a] - t[b];
  return base_.IncrementSecondMoment(a, b) + static_cast<double>(d * d);
}

PartialSumProcess::PartialSumProcess(const IndexSet& set,
                                     const CoefficientSequence& coeffs,
                                     OrthonormalGenerator gen)
    : set_(set), gen_(gen) {
  if (set.size() != coeffs.size() + 1) throw DomainError("T does not match the coefficients");
  scaled_coeffs_.resize(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    scaled_coeffs_[n] = static_cast<double>(sqrtl(set.scale * coeffs.squares()[n]));
  }
}

void PartialSumProcess::Sample(Philox4x32& rng, std::span<double> out) const {
  gen_.Fill(rng, out.subspan(1));
  out[0] = 0;
  for (std::size_t n = 1; n < out.size(); ++n) {
    out[n] = out[n - 1] + scaled_coeffs_[n - 1] * out[n];
  }
}

double PartialSumProcess::IncrementSecondMoment(std::size_t a, std::size_t b) const {
  return static_cast<double>(fabsl(set_.points[a] - set_.points[b]));
}

SupEstimates EstimateSups(const ProcessSampler& process, std::size_t paths,
                          std::uint64_t seed, int workers) {
  const std::size_t n = process.points().size();
  std::vector<double> origin(paths), pair(paths), top(paths);
  ParallelFor(paths, workers, [&](std::size_t path) {
    auto rng = MakeStream(seed, StreamDomain::kPaths, path);
    std::vector<double> x(n);
    process.Sample(rng, x);
    double lo = x[0], hi = x[0], sq = 0;
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sq = std::max(sq, (v - x[0]) * (v - x[0]));
    }
    origin[path] = sq;
    pair[path] = (hi - lo) * (hi - lo);
    top[path] = hi;
  });
  return {Summarize(origin, seed), Summarize(pair, seed), Summarize(top, seed)};
}

std::vector<MCEstimate> EstimateIncrementMoments(
    const ProcessSampler& process,
    std::span<const std::pair<std::size_t, std::size_t>> pairs,
    std::size_t paths, std::uint64_t seed, int workers) {
  const std::size_t n = process.points().size();
  std::vector<double> values(paths * pairs.size());
  ParallelFor(paths, workers, [&](std::size_t path) {
    auto rng = MakeStream(seed, StreamDomain::kPaths, path);
    std::vector<double> x(n);
    process.Sample(rng, x);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const double d = x[pairs[q].first] - x[pairs[q].second];
      values[q * paths + path] = d * d;
    }
  });
  std::vector<MCEstimate> out;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    out.push_back(Summarize(std::span<const double>(values).subspan(q * paths, paths), seed));
  }
  return out;
}

double SecondMomentOracle(const SingleLevelInstance& inst, Real s, Real t) {
  if (inst.k < 1) throw DomainError("construction level must be at least 1");
  const Real parent_left = PartitionTree::CellLeft(inst.k - 1, inst.parent_index);
  const Real parent_right = parent_left + PartitionTree::CellWidth(inst.k - 1);
  for (Real p : {s, t}) {
    if (p < parent_left || p > parent_right) {
      throw DomainError("oracle points must lie in the closed parent cell");
    }
  }
  const SkeletonLaw law = BuildSkeletonLaw(inst.child_mass, inst.good_mask);
  const Real child_width = PartitionTree::CellWidth(inst.k);
  const Real fine = ldexpl(1.0L, inst.k);
  const Real coarse = ldexpl(1.0L, -inst.k);

  struct Where {
    int child = -1;  // -1: right endpoint of the parent, pinned at zero
    Real local = 0;
  };
  auto locate = [&](Real p) {
    Where w;
    if (p == parent_right) return w;
    w.child = std::min(3, static_cast<int>(floorl((p - parent_left) * fine * fine)));
    w.local = p - (parent_left + w.child * child_width);
    return w;
  };
  const Where ws = locate(s);
  const Where wt = locate(t);
  auto skeleton_at = [&](const std::array<double, 5>& sk, const Where& w) -> Real {
    if (w.child < 0) return 0;
    return coarse * sk[w.child] + fine * w.local * (sk[w.child + 1] - sk[w.child]);
  };

  int free_idx[4];
  int free_count = 0;
  for (int j = 0; j < 4; ++j) {
    if (j != law.measurable) free_idx[free_count++] = j;
  }
  long double skeleton_part = 0;
  std::array<long double, 4> tau_mass{};
  for (int tau = 0; tau < 4; ++tau) {
    const long double p = law.tau_prob[tau];
    if (p <= 0) continue;
    for (int bits = 0; bits < (1 << free_count); ++bits) {
      std::array<double, 4> z{};
      if (law.measurable >= 0) {
        z[law.measurable] = tau == law.plus_child    ? law.x
                            : tau == law.minus_child ? law.y
                                                     : 0.0;
      }
      for (int f = 0; f < free_count; ++f) {
        z[free_idx[f]] = (bits >> f) & 1 ? 1.0 : -1.0;
      }
      const long double w = p * ldexpl(1.0L, -free_count);
      const auto sk = SSkeleton(z);
      const long double d = skeleton_at(sk, ws) - skeleton_at(sk, wt);
      skeleton_part += w * d * d;
      tau_mass[tau] += w;
    }
  }
  // Leaf j enters as P_j^{-1/2} Y_j 1{tau=j}; its variance is weighted by
  // E 1{tau=j} / P_j and vanishes for children that tau never selects.
  auto leaf_weight = [&](int child) -> long double {
    if (child < 0 || law.tau_prob[child] <= 0) return 0;
    return tau_mass[child] / law.tau_prob[child];
  };
  auto bridge_var = [&](Real d) { return d * (1 - fine * fine * d); };
  long double leaf_part = 0;
  if (ws.child >= 0 && ws.child == wt.child) {
    leaf_part = leaf_weight(ws.child) * bridge_var(fabsl(ws.local - wt.local));
  } else {
    leaf_part = leaf_weight(ws.child) * bridge_var(ws.local) +
                leaf_weight(wt.child) * bridge_var(wt.local);
  }
  return static_cast<double>(skeleton_part + leaf_part);
}

ChainingReport VerifyChainingBound(const CoefficientSequence& coeffs,
                                   const DiscreteMeasure& m,
                                   const OrthonormalGenerator& gen,
                                   std::size_t paths, std::uint64_t seed,
                                   int workers) {
  const IndexSet set = BuildIndexSet(coeffs);
  ChainingReport report;
  report.strong = StrongFunctional(m, set).value;
  if (std::isinf(report.strong)) {
    report.skipped = true;
    return report;
  }
  report.bound = kChainingConstant * report.strong * report.strong;
  const PartialSumProcess process(set, coeffs, gen);
  report.estimate = EstimateSups(process, paths, seed, workers).sup_pair_square;
  report.margin = 3 * report.estimate.std_error;
  report.pass = report.estimate.mean <= report.bound + report.margin;
  return report;
}

LowerBoundReport RunLowerBound(const IndexSet& set, const PartitionTree& tree,
                               const DiscreteMeasure& m, int base_depth,
                               std::size_t paths, std::uint64_t seed,
                               int workers) {
  const AdversarialProcess base(set, tree, m, base_depth);
  LowerBoundReport report;
  report.base_depth = base.base_depth();
  report.clipped = base.clipped();
  report.filtered_sum = FilteredSum(ClassifyGoodIndices(m, tree), report.base_depth);
  report.skeleton_gain = base.SkeletonGain();

  const std::size_t n = set.size();
  std::vector<double> square(paths), lifted(paths), top(paths);
  ParallelFor(paths, workers, [&](std::size_t path) {
    auto rng = MakeStream(seed, StreamDomain::kPaths, path);
    std::vector<double> y(n);
    base.Sample(rng, y);
    std::normal_distribution<double> normal;
    const double z = normal(rng);
    double sq = 0, lift_top = 0, base_top = y[0];
    for (std::size_t i = 0; i < n; ++i) {
      const double x = y[i] + static_cast<double>(set.points[i]) * z;
      const double dx = x - y[0];
      sq = std::max(sq, dx * dx);
      lift_top = std::max(lift_top, dx);
      base_top = std::max(base_top, y[i]);
    }
    square[path] = sq;
    lifted[path] = lift_top;
    top[path] = base_top;
  });
  report.sup_square = Summarize(square, seed);
  report.sup_lifted = Summarize(lifted, seed);
  report.sup_base = Summarize(top, seed);
  report.rhs = kLowerBoundConstant * std::sqrt(report.sup_square.mean) +
               3 * report.sup_square.std_error;
  report.pass = report.filtered_sum <= report.rhs;
  return report;
}

}  // namespace orthochain
