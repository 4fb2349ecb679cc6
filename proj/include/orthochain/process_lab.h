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

#ifndef ORTHOCHAIN_PROCESS_LAB_H_
#define ORTHOCHAIN_PROCESS_LAB_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orthochain/functionals.h"
#include "orthochain/rng.h"
#include "orthochain/series_core.h"

namespace orthochain {

// Theorem-2 style chaining constant 16 * 5^{5/2}.
inline constexpr double kChainingConstant = 16.0 * 55.90169943749474241023;
// Constant relating the filtered sum to the orthogonal-process supremum.
inline constexpr double kLowerBoundConstant = 64.0;

enum class GeneratorKind { kGaussian, kRademacher, kTrigonometric };

GeneratorKind ParseGeneratorKind(const std::string& name);
std::string GeneratorName(GeneratorKind kind);

// Orthonormal sequences: iid N(0,1); iid signs; sqrt(2) cos(2 pi n w) with w
// uniform on [0,1).
struct OrthonormalGenerator {
  GeneratorKind kind = GeneratorKind::kGaussian;

  // Writes phi_1..phi_{out.size()} for one draw.
  void Fill(Philox4x32& rng, std::span<double> out) const;
};

struct MCEstimate {
  double mean = 0;
  double std_error = 0;  // sample std / sqrt(paths)
  std::size_t paths = 0;
  std::uint64_t seed = 0;
};

MCEstimate Summarize(std::span<const double> samples, std::uint64_t seed);

// E max_{1<=m<=N} (sum_{n<=m} a_n phi_n)^2 on the raw coefficients.
MCEstimate SimulateSupSquare(const CoefficientSequence& coeffs,
                             const OrthonormalGenerator& gen,
                             std::size_t paths, std::uint64_t seed,
                             int workers = 1);

// S_0 = 0, S_j = sum_{l<j} Z_l - (j/4) sum_l Z_l; S_4 = 0.
std::array<double, 5> SSkeleton(const std::array<double, 4>& z);

// Joint law of (tau, Z_0..Z_3) for one parent cell. Z_n, when present, is
// x 1{tau = plus_child} + y 1{tau = minus_child}; every other Z is an
// independent sign.
struct SkeletonLaw {
  std::array<double, 4> tau_prob{};
  int measurable = -1;  // n in {3, 2}, or -1 when every Z is independent
  int plus_child = -1;
  int minus_child = -1;
  double x = 0;
  double y = 0;
  bool degenerate_fallback = false;
};

// Picks n = 3 (even pair) when the even pair meets the good set, else n = 2
// (odd pair), else none. `good_mask` is a bitmask over children j.
SkeletonLaw BuildSkeletonLaw(const std::array<double, 4>& child_mass,
                             unsigned good_mask);

// Forces the construction on one pair: n = 3 uses children (0, 2), n = 2
// uses (3, 1).
SkeletonLaw BuildSkeletonLawFor(const std::array<double, 4>& child_mass,
                                int n);

struct SkeletonDraw {
  int tau = 0;
  std::array<double, 4> z{};
};

SkeletonDraw SampleSkeleton(const SkeletonLaw& law, Philox4x32& rng);

struct SkeletonVariables {
  SkeletonLaw law;
  SkeletonDraw draw;
};

SkeletonVariables BuildSkeletonVariables(const std::array<double, 4>& child_mass,
                                         unsigned good_mask, std::uint64_t seed);

// Exact moments by enumerating tau and every sign vector of the free Z's.
struct SkeletonMoments {
  double mean_zn = 0;
  double second_zn = 0;
  // V_n = sum_j (E S_j 1{tau=j} - (E (S_{j+1} - S_j) 1{tau=j})_-).
  double v = 0;
  std::array<double, 4> tau_prob{};
};

SkeletonMoments EnumerateSkeletonMoments(const SkeletonLaw& law);

// (1/4) sqrt(P_a P_b / (P_a + P_b)) for the law's pair; 0 without a pair.
double PairGainClosedForm(const SkeletonLaw& law);

// Cov(Y(s), Y(t)) = min(s', t') - 4^k s' t' in cell-local coordinates.
double BridgeCovariance(Real s_local, Real t_local, int k);

// Gaussian bridge on the level-k cell starting at `left`, pinned to zero at
// both endpoints, sampled at the sorted `points` by the exact sequential
// recursion.
void BridgeLeafSample(Real left, int k, std::span<const Real> points,
                      Philox4x32& rng, std::span<double> out);

class ProcessSampler {
 public:
  virtual ~ProcessSampler() = default;
  virtual std::span<const Real> points() const = 0;
  // Draws one path; consumes `rng` only.
  virtual void Sample(Philox4x32& rng, std::span<double> out) const = 0;
  // Declared E|X(s) - X(t)|^2 for point indices a, b.
  virtual double IncrementSecondMoment(std::size_t a, std::size_t b) const = 0;
};

class BridgeProcess : public ProcessSampler {
 public:
  BridgeProcess(std::vector<Real> points, int k, std::uint64_t cell_index);

  std::span<const Real> points() const override { return points_; }
  void Sample(Philox4x32& rng, std::span<double> out) const override;
  double IncrementSecondMoment(std::size_t a, std::size_t b) const override;

 private:
  std::vector<Real> points_;
  int k_;
  Real left_;
};

// Recursive adversarial process over T down to `base_depth`. Only the child
// selected by tau is expanded at each level; the others keep their linear
// skeleton term. Leaves are Gaussian bridges.
class AdversarialProcess : public ProcessSampler {
 public:
  AdversarialProcess(const IndexSet& set, const PartitionTree& tree,
                     const DiscreteMeasure& m, int base_depth);

  std::span<const Real> points() const override { return set_.points; }
  void Sample(Philox4x32& rng, std::span<double> out) const override;
  // |s - t| (1 - |s - t|).
  double IncrementSecondMoment(std::size_t a, std::size_t b) const override;

  int base_depth() const { return base_depth_; }
  bool clipped() const { return clipped_; }
  // Sum_k 2^-k Sum_parents m(parent)^{1/2} V(parent) over levels 1..base.
  double SkeletonGain() const { return skeleton_gain_; }

 private:
  const IndexSet& set_;
  const PartitionTree& tree_;
  int base_depth_;
  bool clipped_ = false;
  std::vector<std::vector<SkeletonLaw>> laws_;  // per parent level
  double skeleton_gain_ = 0;
};

// X(t) = Y(t) + t Z with Z ~ N(0,1) independent of Y. The base path is drawn
// first from the same stream, so Y and X paths pair up.
class OrthogonalLift : public ProcessSampler {
 public:
  explicit OrthogonalLift(const ProcessSampler& base) : base_(base) {}

  std::span<const Real> points() const override { return base_.points(); }
  void Sample(Philox4x32& rng, std::span<double> out) const override;
  double IncrementSecondMoment(std::size_t a, std::size_t b) const override;

 private:
  const ProcessSampler& base_;
};

// X(t_m) = sum_{n<=m} sqrt(scale) a_n phi_n on the normalized T.
class PartialSumProcess : public ProcessSampler {
 public:
  PartialSumProcess(const IndexSet& set, const CoefficientSequence& coeffs,
                    OrthonormalGenerator gen);

  std::span<const Real> points() const override { return set_.points; }
  void Sample(Philox4x32& rng, std::span<double> out) const override;
  double IncrementSecondMoment(std::size_t a, std::size_t b) const override;

 private:
  const IndexSet& set_;
  std::vector<double> scaled_coeffs_;
  OrthonormalGenerator gen_;
};

struct SupEstimates {
  MCEstimate sup_square_from_origin;  // E sup_t (X(t) - X(0))^2
  MCEstimate sup_pair_square;         // E sup_{s,t} |X(s) - X(t)|^2
  MCEstimate sup_value;               // E sup_t X(t)
};

SupEstimates EstimateSups(const ProcessSampler& process, std::size_t paths,
                          std::uint64_t seed, int workers = 1);

std::vector<MCEstimate> EstimateIncrementMoments(
    const ProcessSampler& process,
    std::span<const std::pair<std::size_t, std::size_t>> pairs,
    std::size_t paths, std::uint64_t seed, int workers = 1);

// One parent cell at level k-1 whose four children are bridge leaves.
struct SingleLevelInstance {
  int k = 1;
  std::uint64_t parent_index = 0;
  std::array<double, 4> child_mass{};
  unsigned good_mask = 0;
};

// Exact E|Y(s) - Y(t)|^2 for the one-level construction, by enumeration over
// tau and the free signs, plus analytic leaf variances.
double SecondMomentOracle(const SingleLevelInstance& inst, Real s, Real t);

struct ChainingReport {
  bool skipped = false;
  double strong = 0;
  double bound = 0;  // 16 5^{5/2} strong^2
  MCEstimate estimate;
  double margin = 0;  // 3 SE
  bool pass = false;
};

ChainingReport VerifyChainingBound(const CoefficientSequence& coeffs,
                                   const DiscreteMeasure& m,
                                   const OrthonormalGenerator& gen,
                                   std::size_t paths, std::uint64_t seed,
                                   int workers = 1);

struct LowerBoundReport {
  int base_depth = 0;
  bool clipped = false;
  double filtered_sum = 0;   // levels 1..base_depth
  double skeleton_gain = 0;  // analytic lower bound carried by the skeletons
  MCEstimate sup_square;     // E sup_t (X(t) - X(0))^2 of the lifted process
  MCEstimate sup_lifted;     // E sup_t (X(t) - X(0))
  MCEstimate sup_base;       // E sup_t Y(t), a constructive lower bound
  double rhs = 0;            // 64 sqrt(sup_square) + 3 SE
  bool pass = false;
};

LowerBoundReport RunLowerBound(const IndexSet& set, const PartitionTree& tree,
                               const DiscreteMeasure& m, int base_depth,
                               std::size_t paths, std::uint64_t seed,
                               int workers = 1);

}  // namespace orthochain

#endif  // ORTHOCHAIN_PROCESS_LAB_H_
