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

#include "orthochain/verify_suites.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>

#include "orthochain/errors.h"
#include "orthochain/functionals.h"
#include "orthochain/measure_opt.h"
#include "orthochain/process_lab.h"
#include "orthochain/rng.h"

namespace orthochain {
namespace {

constexpr double kExact = 1e-12;

std::array<double, 4> RandomChildMasses(Philox4x32& rng) {
  std::exponential_distribution<double> unit(1.0);
  std::array<double, 4> mass{};
  double total = 0;
  for (double& m : mass) total += (m = unit(rng));
  for (double& m : mass) m /= total;
  return mass;
}

// E (S_l - S_m)^2 under `law`, by enumeration; returns the largest deviation
// from |l-m| (1 - |l-m|/4) over all 25 pairs.
double SkeletonIdentityDeviation(const SkeletonLaw& law) {
  double worst = 0;
  for (int l = 0; l <= 4; ++l) {
    for (int m = 0; m <= 4; ++m) {
      long double acc = 0;
      for (int tau = 0; tau < 4; ++tau) {
        if (law.tau_prob[tau] <= 0) continue;
        for (int bits = 0; bits < 16; ++bits) {
          std::array<double, 4> z{};
          long double w = law.tau_prob[tau];
          for (int j = 0; j < 4; ++j) {
            if (j == law.measurable) {
              z[j] = tau == law.plus_child ? law.x : tau == law.minus_child ? law.y : 0.0;
              if ((bits >> j) & 1) w = 0;  // count each tau once
            } else {
              z[j] = (bits >> j) & 1 ? 1.0 : -1.0;
              w *= 0.5L;
            }
          }
          if (w == 0) continue;
          const auto s = SSkeleton(z);
          acc += w * (s[l] - s[m]) * (s[l] - s[m]);
        }
      }
      const double d = std::abs(l - m);
      worst = std::max(worst, std::abs(static_cast<double>(acc) - d * (1 - d / 4)));
    }
  }
  return worst;
}

SuiteResult SkeletonSuite() {
  SuiteResult r{"skeleton", {}};
  for (int l = 0; l <= 4; ++l) {
    for (int m = 0; m <= 4; ++m) {
      long double acc = 0;
      for (int bits = 0; bits < 16; ++bits) {
        std::array<double, 4> z{};
        for (int j = 0; j < 4; ++j) z[j] = (bits >> j) & 1 ? 1.0 : -1.0;
        const auto s = SSkeleton(z);
        acc += (s[l] - s[m]) * (s[l] - s[m]);
      }
      const double d = std::abs(l - m);
      r.checks.push_back(ExpectNear(
          "E|S_" + std::to_string(l) + "-S_" + std::to_string(m) + "|^2",
          static_cast<double>(acc / 16), d * (1 - d / 4), kExact));
    }
  }
  return r;
}

SuiteResult ConstructionSuite(const VerifyContext& ctx) {
  SuiteResult r{"construction", {}};
  auto rng = MakeStream(ctx.seed, StreamDomain::kSkeleton, 1);
  double worst_mean = 0, worst_second = 0, worst_gain = 0, worst_identity = 0;
  for (int draw = 0; draw < ctx.random_draws; ++draw) {
    const auto mass = RandomChildMasses(rng);
    for (int n : {3, 2}) {
      const SkeletonLaw law = BuildSkeletonLawFor(mass, n);
      const SkeletonMoments mom = EnumerateSkeletonMoments(law);
      worst_mean = std::max(worst_mean, std::abs(mom.mean_zn));
      worst_second = std::max(worst_second, std::abs(mom.second_zn - 1));
      worst_gain = std::max(worst_gain, std::abs(mom.v - PairGainClosedForm(law)));
      worst_identity = std::max(worst_identity, SkeletonIdentityDeviation(law));
    }
  }
  r.checks.push_back(ExpectNear("max |E Z_n|", worst_mean, 0, kExact));
  r.checks.push_back(ExpectNear("max |E Z_n^2 - 1|", worst_second, 0, kExact));
  r.checks.push_back(ExpectNear("max |V_n - closed form|", worst_gain, 0, kExact));
  r.checks.push_back(
      ExpectNear("max skeleton identity deviation with tau-measurable Z_n",
                 worst_identity, 0, kExact));
  const SkeletonLaw independent = BuildSkeletonLaw({0.25, 0.25, 0.25, 0.25}, 0);
  r.checks.push_back(ExpectNear("V with empty good set",
                                EnumerateSkeletonMoments(independent).v, 0, kExact));
  return r;
}

SuiteResult LevelIdentitySuite(const VerifyContext& ctx) {
  SuiteResult r{"lemma4", {}};
  auto rng = MakeStream(ctx.seed, StreamDomain::kSkeleton, 2);
  std::exponential_distribution<double> unit(1.0);
  const int instances = std::max(1, ctx.random_draws / 2);
  double worst = 0;
  std::size_t pairs = 0;
  for (int inst_id = 0; inst_id < instances; ++inst_id) {
    SingleLevelInstance inst;
    inst.k = 1 + static_cast<int>(rng() % 3);
    const std::uint64_t parents = std::uint64_t{1} << (2 * (inst.k - 1));
    inst.parent_index = rng() % parents;
    const Real left = PartitionTree::CellLeft(inst.k - 1, inst.parent_index);
    const Real width = PartitionTree::CellWidth(inst.k - 1);
    const int count = 1 + static_cast<int>(rng() % 16);
    std::vector<Real> pts;
    for (int i = 0; i < count; ++i) {
      pts.push_back(left + width * std::generate_canonical<double, 64>(rng));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::array<bool, 4> nonempty{};
    for (Real p : pts) {
      const int j = std::min(3, static_cast<int>(floorl((p - left) * 4 / width)));
      inst.child_mass[j] += unit(rng);
      nonempty[j] = true;
    }
    inst.good_mask = GoodChildren(inst.child_mass, nonempty);
    pts.push_back(left);
    pts.push_back(left + width);
    const Real scale = ldexpl(1.0L, 2 * (inst.k - 1));
    for (Real s : pts) {
      for (Real t : pts) {
        const Real d = fabsl(s - t);
        const double closed = static_cast<double>(d * (1 - scale * d));
        worst = std::max(worst, std::abs(SecondMomentOracle(inst, s, t) - closed));
        ++pairs;
      }
    }
  }
  r.checks.push_back(ExpectNear("max |oracle - |s-t|(1-4^{k-1}|s-t|)| over " +
                                    std::to_string(pairs) + " pairs",
                                worst, 0, kExact));
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> RandomPairs(std::size_t n,
                                                             int count,
                                                             Philox4x32& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n < 2) return pairs;
  while (static_cast<int>(pairs.size()) < count) {
    const std::size_t a = rng() % n;
    const std::size_t b = rng() % n;
    if (a != b) pairs.emplace_back(a, b);
  }
  return pairs;
}

SuiteResult BridgeSuite(const VerifyContext& ctx) {
  SuiteResult r{"bridge", {}};
  auto rng = MakeStream(ctx.seed, StreamDomain::kSkeleton, 3);

  // Analytic identities.
  double worst_bridge = 0, worst_lift = 0;
  for (int i = 0; i < 200; ++i) {
    const int k = static_cast<int>(rng() % 6);
    const Real width = PartitionTree::CellWidth(k);
    const Real s = width * std::generate_canonical<double, 64>(rng);
    const Real t = width * std::generate_canonical<double, 64>(rng);
    const double inc = BridgeCovariance(s, s, k) + BridgeCovariance(t, t, k) -
                       2 * BridgeCovariance(s, t, k);
    const Real d = fabsl(s - t);
    const double closed = static_cast<double>(d * (1 - ldexpl(d, 2 * k)));
    worst_bridge = std::max(worst_bridge, std::abs(inc - closed));
    if (k == 0) {
      worst_lift = std::max(worst_lift,
                            std::abs(closed + static_cast<double>(d * d) -
                                     static_cast<double>(d)));
    }
  }
  r.checks.push_back(ExpectNear("bridge covariance increment identity", worst_bridge, 0, kExact));
  r.checks.push_back(ExpectNear("orthogonal lift increment identity", worst_lift, 0, kExact));

  // Monte Carlo on a level-1 bridge with 16 random points.
  const std::uint64_t cell = rng() % 4;
  std::vector<Real> pts;
  for (int i = 0; i < 16; ++i) {
    pts.push_back(PartitionTree::CellLeft(1, cell) +
                  PartitionTree::CellWidth(1) * std::generate_canonical<double, 64>(rng));
  }
  std::sort(pts.begin(), pts.end());
  const BridgeProcess bridge(pts, 1, cell);
  const auto bridge_pairs = RandomPairs(pts.size(), 20, rng);
  const auto bridge_mc = EstimateIncrementMoments(bridge, bridge_pairs, ctx.paths,
                                                  ctx.seed, ctx.workers);
  for (std::size_t q = 0; q < bridge_pairs.size(); ++q) {
    const auto [a, b] = bridge_pairs[q];
    r.checks.push_back(ExpectNear("bridge MC pair " + std::to_string(q),
                                  bridge_mc[q].mean,
                                  bridge.IncrementSecondMoment(a, b),
                                  3 * bridge_mc[q].std_error));
  }

  // Monte Carlo on the lifted adversarial process over T (uniform measure).
  const IndexSet& set = *ctx.set;
  const DiscreteMeasure uniform = DiscreteMeasure::Uniform(set.size());
  const AdversarialProcess adversarial(set, *ctx.tree, uniform,
                                       std::min(2, static_cast<int>(ctx.tree->depth())));
  const OrthogonalLift lift(adversarial);
  const auto lift_pairs = RandomPairs(set.size(), 20, rng);
  const auto lift_mc = EstimateIncrementMoments(lift, lift_pairs, ctx.paths,
                                                ctx.seed + 1, ctx.workers);
  for (std::size_t q = 0; q < lift_pairs.size(); ++q) {
    const auto [a, b] = lift_pairs[q];
    const double target = static_cast<double>(fabsl(set.points[a] - set.points[b]));
    r.checks.push_back(ExpectNear("lifted MC pair " + std::to_string(q), lift_mc[q].mean,
                                  target, 3 * lift_mc[q].std_error));
  }
  return r;
}

SuiteResult InequalitySuite(const VerifyContext& ctx) {
  SuiteResult r{"inequalities", {}};
  const IndexSet& set = *ctx.set;
  const PartitionTree& tree = *ctx.tree;
  int pointwise = 0, weak_dyadic = 0, chain = 0, weak_filtered = 0,
      dyadic_filtered = 0, late_good = 0, strong_dyadic = 0;
  for (int draw = 0; draw < ctx.random_draws; ++draw) {
    const auto m = DiscreteMeasure::DirichletRandom(set.size(), ctx.seed + draw);
    double weighted = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double at = StrongFunctionalAt(m, set, i);
      const double series = PointDyadicSeries(m, set, i);
      if (at > series * (1 + kExact)) ++pointwise;
      weighted += m[i] * series;
    }
    const double weak = WeakFunctional(m, set);
    const double strong = StrongFunctional(m, set).value;
    const double dyadic = DyadicBound(m, tree);
    const GoodIndexTable table = ClassifyGoodIndices(m, tree);
    const double filtered = FilteredBound(table);
    if (weak > weighted * (1 + kExact)) ++chain;
    if (weighted > dyadic * (1 + kExact)) ++chain;
    if (weak > dyadic * (1 + kExact)) ++weak_dyadic;
    if (weak > filtered * (1 + kExact)) ++weak_filtered;
    if (dyadic > filtered * (1 + kExact)) ++dyadic_filtered;
    if (table.last_good_level > tree.separation_depth() + 1) ++late_good;
    if (strong > dyadic * (1 + kExact)) ++strong_dyadic;
  }
  r.checks.push_back(ExpectNear("violations: strong_at(t) <= per-point dyadic series", pointwise, 0, 0));
  r.checks.push_back(ExpectNear("violations: weak <= sum_t w_t series(t) <= dyadic bound", chain, 0, 0));
  r.checks.push_back(ExpectNear("violations: weak <= dyadic bound", weak_dyadic, 0, 0));
  r.checks.push_back(ExpectNear("violations: dyadic bound <= filtered bound", dyadic_filtered, 0, 0));
  r.checks.push_back(ExpectNear("violations: weak <= filtered bound", weak_filtered, 0, 0));
  r.checks.push_back(ExpectNear("good indices past separation depth + 1", late_good, 0, 0));
  Check sup_check = ExpectNear("draws with strong > dyadic bound", strong_dyadic, 0, 0);
  sup_check.informational = true;
  r.checks.push_back(sup_check);
  return r;
}

SuiteResult ChainingSuite(const VerifyContext& ctx) {
  SuiteResult r{"chaining", {}};
  if (ctx.coeffs == nullptr) return r;
  for (GeneratorKind kind : {GeneratorKind::kGaussian, GeneratorKind::kRademacher,
                             GeneratorKind::kTrigonometric}) {
    const ChainingReport rep = VerifyChainingBound(
        *ctx.coeffs, *ctx.measure, OrthonormalGenerator{kind}, ctx.paths, ctx.seed,
        ctx.workers);
    if (rep.skipped) continue;
    r.checks.push_back(ExpectAtMost("E sup|X(s)-X(t)|^2 <= 16*5^(5/2)*strong^2 (" +
                                        GeneratorName(kind) + ")",
                                    rep.estimate.mean, rep.bound, rep.margin));
  }
  return r;
}

SuiteResult LowerBoundSuite(const VerifyContext& ctx) {
  SuiteResult r{"lowerbound", {}};
  const IndexSet& set = *ctx.set;
  auto run = [&](const DiscreteMeasure& m, const std::string& label) {
    const LowerBoundReport rep =
        RunLowerBound(set, *ctx.tree, m, ctx.base_depth, ctx.paths, ctx.seed, ctx.workers);
    r.checks.push_back(ExpectAtMost("filtered sum <= 64 sqrt(E sup (X-X(0))^2) + 3SE (" + label + ")",
                                    rep.filtered_sum, rep.rhs, 0));
    r.checks.push_back(ExpectAtMost("filtered sum / 64 <= skeleton gain (" + label + ")",
                                    rep.filtered_sum / kLowerBoundConstant,
                                    rep.skeleton_gain, kExact));
    r.checks.push_back(ExpectAtMost("skeleton gain <= E sup Y + 3SE (" + label + ")",
                                    rep.skeleton_gain, rep.sup_base.mean,
                                    3 * rep.sup_base.std_error));
  };
  run(*ctx.measure, "configured measure");
  const int draws = std::min(ctx.random_draws, 5);
  for (int d = 0; d < draws; ++d) {
    run(DiscreteMeasure::DirichletRandom(set.size(), ctx.seed + 1000 + d),
        "dirichlet " + std::to_string(d));
  }
  return r;
}

}  // namespace

bool SuiteResult::pass() const { return failures() == 0; }

int SuiteResult::failures() const {
  int f = 0;
  for (const Check& c : checks) {
    if (!c.pass && !c.informational) ++f;
  }
  return f;
}

Check ExpectNear(std::string name, double measured, double expected, double tol) {
  Check c{std::move(name), "eq", measured, expected, tol, true, false};
  c.pass = std::abs(measured - expected) <= tol;
  return c;
}

Check ExpectAtMost(std::string name, double measured, double bound, double slack) {
  Check c{std::move(name), "le", measured, bound, slack, true, false};
  c.pass = measured <= bound + slack;
  return c;
}

const std::vector<std::string>& SuiteNames() {
  static const std::vector<std::string> names = {
      "skeleton", "construction", "lemma4", "bridge", "inequalities", "chaining", "lowerbound"};
  return names;
}

std::vector<SuiteResult> RunSuites(const std::string& name,
                                   const VerifyContext& ctx) {
  if (name == "all") {
    std::vector<SuiteResult> all;
    for (const auto& n : SuiteNames()) {
      auto one = RunSuites(n, ctx);
      all.insert(all.end(), one.begin(), one.end());
    }
    return all;
  }
  if (name == "skeleton") return {SkeletonSuite()};
  if (name == "construction") return {ConstructionSuite(ctx)};
  if (name == "lemma4") return {LevelIdentitySuite(ctx)};
  if (name == "bridge") return {BridgeSuite(ctx)};
  if (name == "inequalities") return {InequalitySuite(ctx)};
  if (name == "chaining") return {ChainingSuite(ctx)};
  if (name == "lowerbound") return {LowerBoundSuite(ctx)};
  throw DomainError("unknown suite '" + name + "'");
}

}  // namespace orthochain
