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

#ifndef ORTHOCHAIN_VERIFY_SUITES_H_
#define ORTHOCHAIN_VERIFY_SUITES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "orthochain/series_core.h"

namespace orthochain {

struct Check {
  std::string name;
  std::string relation;  // "eq": |measured - expected| <= tolerance; "le": measured <= expected + tolerance
  double measured = 0;
  double expected = 0;
  double tolerance = 0;
  bool pass = true;
  // Reported but not asserted.
  bool informational = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const;
  int failures() const;
};

struct VerifyContext {
  const CoefficientSequence* coeffs = nullptr;  // null when T was given directly
  const IndexSet* set = nullptr;
  const PartitionTree* tree = nullptr;  // must reach the separation depth
  const DiscreteMeasure* measure = nullptr;
  int random_draws = 100;
  std::uint64_t seed = 0;
  std::size_t paths = 100000;
  int workers = 1;
  int base_depth = 3;
};

// skeleton, construction, lemma4, bridge, inequalities, chaining, lowerbound.
const std::vector<std::string>& SuiteNames();

// "all" runs every suite in order. Throws DomainError on unknown names.
std::vector<SuiteResult> RunSuites(const std::string& name,
                                   const VerifyContext& ctx);

Check ExpectNear(std::string name, double measured, double expected, double tol);
Check ExpectAtMost(std::string name, double measured, double bound, double slack);

}  // namespace orthochain

#endif  // ORTHOCHAIN_VERIFY_SUITES_H_
