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

#ifndef ORTHOCHAIN_MEASURE_OPT_H_
#define ORTHOCHAIN_MEASURE_OPT_H_

#include <cstdint>
#include <vector>

#include "orthochain/series_core.h"

namespace orthochain {

struct OptimizerOptions {
  int max_iters = 2000;
  // Stop once the best value improves by less than tolerance * |best| over
  // `patience` consecutive iterations.
  double tolerance = 1e-8;
  int patience = 200;
  double eta0 = 1.0;  // step eta_k = eta0 / sqrt(k) on the sup-normalized gradient
  int restarts = 8;
  std::uint64_t seed = 0;
  int workers = 1;

  void Validate() const;
};

struct OptimizationResult {
  DiscreteMeasure measure = DiscreteMeasure::Uniform(1);
  double value = 0;
  int iterations = 0;
  bool converged = false;
  bool heuristic = false;
  std::vector<double> trace;  // best-so-far objective per iteration
};

// Entropic mirror descent on the simplex for inf_m sup_t of the strong
// functional, started at the uniform measure. Returns the best iterate, so
// the value never exceeds the uniform one.
OptimizationResult MinimizeStrong(const IndexSet& set,
                                  const OptimizerOptions& opts);

// Heuristic for sup_mu of the weak functional: multiplicative reweighting
// w_t <- w_t exp(eta c_t) with c_t the per-point integral, from the uniform
// start plus (restarts - 1) Dirichlet starts. No optimality certificate.
OptimizationResult MaximizeWeak(const IndexSet& set,
                                const OptimizerOptions& opts);

struct DualityGapReport {
  OptimizationResult minimizer;
  OptimizationResult maximizer;
  double min_strong = 0;  // upper estimate of inf_m sup_t
  double max_weak = 0;    // lower estimate of sup_mu weak
  double ratio = 1;       // min_strong / max_weak (1 when both vanish)
  // weak <= strong checked on both returned measures.
  bool weak_below_strong = true;
};

DualityGapReport ComputeDualityGap(const IndexSet& set,
                                   const OptimizerOptions& opts);

}  // namespace orthochain

#endif  // ORTHOCHAIN_MEASURE_OPT_H_
