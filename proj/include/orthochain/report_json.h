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

#ifndef ORTHOCHAIN_REPORT_JSON_H_
#define ORTHOCHAIN_REPORT_JSON_H_

#include <string>

#include "json.hpp"
#include "orthochain/functionals.h"
#include "orthochain/measure_opt.h"
#include "orthochain/process_lab.h"
#include "orthochain/series_core.h"
#include "orthochain/verify_suites.h"

namespace orthochain {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "v1";

// Non-finite values become null.
Json Number(double x);

// Accepts {"kind": ...} objects, bare arrays of values, or a comma list.
CoefficientSequence ParseCoefficients(const Json& spec);
CoefficientSequence ParseCoefficientsText(const std::string& text);

// Accepts {"weights": [...]} or a bare array; normalized on load.
DiscreteMeasure ParseMeasure(const Json& spec);

Json ToJson(const CoefficientSequence& coeffs);
Json ToJson(const IndexSet& set);
Json ToJson(const PartitionTree& tree);
Json ToJson(const DiscreteMeasure& m);
Json ToJson(const StrongValue& strong);
Json ToJson(const GoodIndexTable& table);
Json ToJson(const FunctionalReport& report);
Json ToJson(const OptimizationResult& result);
Json ToJson(const DualityGapReport& report);
Json ToJson(const MCEstimate& estimate);
Json ToJson(const ChainingReport& report);
Json ToJson(const LowerBoundReport& report);
Json ToJson(const Check& check);
Json ToJson(const SuiteResult& suite);

// Columns k, full_sum, filtered_sum, good_count.
std::string PerLevelCsv(const GoodIndexTable& table);

}  // namespace orthochain

#endif  // ORTHOCHAIN_REPORT_JSON_H_
