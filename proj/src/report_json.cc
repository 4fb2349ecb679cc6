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

#include "orthochain/report_json.h"

#include <cmath>
#include <sstream>

#include "orthochain/errors.h"

namespace orthochain {
namespace {

int RequireCount(const Json& spec) {
  if (!spec.contains("count") || !spec["count"].is_number_integer()) {
    throw InvalidCoefficientError("coefficient family needs an integer 'count'");
  }
  return spec["count"].get<int>();
}

double RequireNumber(const Json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_number()) {
    throw InvalidCoefficientError(std::string("coefficient family needs numeric '") +
                                  key + "'");
  }
  return spec[key].get<double>();
}

std::vector<double> NumberArray(const Json& values, const char* what) {
  if (!values.is_array()) throw Error(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : values) {
    if (!v.is_number()) throw Error(std::string(what) + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

}  // namespace

Json Number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

CoefficientSequence ParseCoefficients(const Json& spec) {
  if (spec.is_array()) {
    return CoefficientSequence::Explicit(NumberArray(spec, "coefficient values"));
  }
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    throw InvalidCoefficientError("coefficient spec needs a string 'kind'");
  }
  const std::string kind = spec["kind"];
  for (const auto& [key, value] : spec.items()) {
    const bool known =
        key == "kind" || (kind == "explicit" && key == "values") ||
        (kind == "power" && (key == "exponent" || key == "count")) ||
        (kind == "geometric" && (key == "ratio" || key == "count"));
    if (!known) throw InvalidCoefficientError("unknown coefficient key '" + key + "'");
  }
  if (kind == "explicit") {
    if (!spec.contains("values")) {
      throw InvalidCoefficientError("at least one coefficient required");
    }
    return CoefficientSequence::Explicit(NumberArray(spec["values"], "coefficient values"));
  }
  if (kind == "power") {
    return CoefficientSequence::Power(RequireNumber(spec, "exponent"), RequireCount(spec));
  }
  if (kind == "geometric") {
    return CoefficientSequence::Geometric(RequireNumber(spec, "ratio"), RequireCount(spec));
  }
  throw InvalidCoefficientError("unknown coefficient kind '" + kind + "'");
}

CoefficientSequence ParseCoefficientsText(const std::string& text) {
  const std::string body = Trim(text);
  if (body.empty()) throw InvalidCoefficientError("at least one coefficient required");
  if (body.front() == '{' || body.front() == '[') {
    Json spec;
    try {
      spec = Json::parse(body);
    } catch (const Json::parse_error& e) {
      throw InvalidCoefficientError(std::string("malformed coefficient JSON: ") + e.what());
    }
    return ParseCoefficients(spec);
  }
  std::vector<double> values;
  std::stringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw InvalidCoefficientError("cannot parse coefficient '" + item + "'");
    }
    values.push_back(v);
  }
  return CoefficientSequence::Explicit(std::move(values));
}

DiscreteMeasure ParseMeasure(const Json& spec) {
  if (spec.is_object()) {
    for (const auto& [key, value] : spec.items()) {
      if (key != "weights") throw InvalidMeasureError("unknown measure key '" + key + "'");
    }
    if (!spec.contains("weights")) throw InvalidMeasureError("measure needs 'weights'");
    return DiscreteMeasure::Explicit(NumberArray(spec["weights"], "measure weights"));
  }
  return DiscreteMeasure::Explicit(NumberArray(spec, "measure weights"));
}

Json ToJson(const CoefficientSequence& coeffs) {
  Json j;
  switch (coeffs.family()) {
    case CoefficientSequence::Family::kExplicit: {
      j["kind"] = "explicit";
      Json values = Json::array();
      for (std::size_t n = 0; n < coeffs.size(); ++n) {
        values.push_back(static_cast<double>(coeffs.value(n)));
      }
      j["values"] = values;
      break;
    }
    case CoefficientSequence::Family::kPower:
      j["kind"] = "power";
      j["exponent"] = coeffs.parameter();
      j["count"] = coeffs.size();
      break;
    case CoefficientSequence::Family::kGeometric:
      j["kind"] = "geometric";
      j["ratio"] = coeffs.parameter();
      j["count"] = coeffs.size();
      break;
  }
  return j;
}

Json ToJson(const IndexSet& set) {
  Json points = Json::array();
  Json gaps = Json::array();
  for (std::size_t i = 0; i < set.size(); ++i) {
    points.push_back(static_cast<double>(set.points[i]));
    if (i > 0) gaps.push_back(static_cast<double>(set.points[i] - set.points[i - 1]));
  }
  Json j;
  j["size"] = set.size();
  j["scale"] = static_cast<double>(set.scale);
  j["raw_total"] = static_cast<double>(set.raw_total);
  j["diameter"] = static_cast<double>(set.diameter());
  j["points"] = points;
  j["gaps"] = gaps;
  return j;
}

Json ToJson(const PartitionTree& tree) {
  Json levels = Json::array();
  for (std::size_t k = 0; k <= tree.depth(); ++k) {
    Json cells = Json::array();
    for (const Cell& c : tree.level(k)) {
      cells.push_back(Json{{"index", c.index}, {"begin", c.begin}, {"end", c.end}});
    }
    levels.push_back(Json{{"k", k}, {"nonempty", cells}});
  }
  Json j;
  j["depth"] = tree.depth();
  j["separation_depth"] = tree.separation_depth();
  j["levels"] = levels;
  return j;
}

Json ToJson(const DiscreteMeasure& m) {
  return Json{{"weights", std::vector<double>(m.weights().begin(), m.weights().end())}};
}

Json ToJson(const StrongValue& strong) {
  return Json{{"value", Number(strong.value)},
              {"infinite", strong.infinite()},
              {"argmax", strong.argmax}};
}

Json ToJson(const GoodIndexTable& table) {
  Json levels = Json::array();
  for (const GoodIndexLevel& level : table.levels) {
    levels.push_back(Json{{"k", level.k},
                          {"good", level.good},
                          {"good_count", level.good.size()},
                          {"nonempty_cells", level.nonempty_cells},
                          {"full_sum", level.full_sum},
                          {"filtered_sum", level.filtered_sum}});
  }
  return Json{{"filtered_total", table.filtered_total},
              {"last_good_level", table.last_good_level},
              {"levels", levels}};
}

Json ToJson(const FunctionalReport& r) {
  Json j;
  j["strong"] = ToJson(r.strong);
  j["strong"]["argmax_point"] = static_cast<double>(r.strong_argmax_point);
  j["weak"] = Number(r.weak_value);
  j["dyadic_bound"] = Number(r.dyadic_bound_value);
  j["weighted_point_dyadic"] = Number(r.weighted_point_dyadic);
  j["filtered_sum"] = Number(r.filtered_sum);
  j["filtered_bound"] = Number(r.filtered_bound_value);
  j["L"] = r.L;
  j["rademacher_menchov"] = Json{{"total", Number(r.rm.total)},
                                 {"log_base", r.rm.log_base},
                                 {"cumulative", r.rm.cumulative}};
  j["separation_depth"] = r.separation_depth;
  j["tail_mass"] = r.tail_mass ? Number(*r.tail_mass) : Json(nullptr);
  j["tail_mass_infinite"] = r.tail_mass && !std::isfinite(*r.tail_mass);
  j["per_level_full"] = r.per_level_full;
  j["good_indices"] = ToJson(r.good);
  j["main_constant"] = r.main_constant_symbolic;
  return j;
}

Json ToJson(const OptimizationResult& r) {
  Json trace = Json::array();
  for (double v : r.trace) trace.push_back(Number(v));
  return Json{{"value", Number(r.value)},
              {"infinite", !std::isfinite(r.value)},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"heuristic", r.heuristic},
              {"measure", ToJson(r.measure)},
              {"trace", trace}};
}

Json ToJson(const DualityGapReport& r) {
  return Json{{"min_strong", Number(r.min_strong)},
              {"max_weak", Number(r.max_weak)},
              {"ratio", Number(r.ratio)},
              {"weak_below_strong", r.weak_below_strong},
              {"minimizer", ToJson(r.minimizer)},
              {"maximizer", ToJson(r.maximizer)}};
}

Json ToJson(const MCEstimate& e) {
  return Json{{"estimate", Number(e.mean)},
              {"stderr", Number(e.std_error)},
              {"paths", e.paths},
              {"seed", e.seed}};
}

Json ToJson(const ChainingReport& r) {
  Json j;
  j["skipped"] = r.skipped;
  j["strong"] = Number(r.strong);
  j["bound"] = Number(r.bound);
  j["constant"] = kChainingConstant;
  j["mc"] = ToJson(r.estimate);
  j["margin"] = r.margin;
  j["pass"] = r.pass;
  return j;
}

Json ToJson(const LowerBoundReport& r) {
  Json j;
  j["base_depth"] = r.base_depth;
  j["clipped"] = r.clipped;
  j["filtered_sum"] = r.filtered_sum;
  j["skeleton_gain"] = r.skeleton_gain;
  j["constant"] = kLowerBoundConstant;
  j["sup_square"] = ToJson(r.sup_square);
  j["sup_lifted"] = ToJson(r.sup_lifted);
  j["sup_base"] = ToJson(r.sup_base);
  j["rhs"] = r.rhs;
  j["pass"] = r.pass;
  return j;
}

Json ToJson(const Check& c) {
  return Json{{"name", c.name},
              {"relation", c.relation},
              {"measured", Number(c.measured)},
              {"expected", Number(c.expected)},
              {"tolerance", Number(c.tolerance)},
              {"pass", c.pass},
              {"informational", c.informational}};
}

Json ToJson(const SuiteResult& suite) {
  Json checks = Json::array();
  for (const Check& c : suite.checks) checks.push_back(ToJson(c));
  return Json{{"suite", suite.suite},
              {"pass", suite.pass()},
              {"failures", suite.failures()},
              {"checks", checks}};
}

std::string PerLevelCsv(const GoodIndexTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "k,full_sum,filtered_sum,good_count\n";
  for (const GoodIndexLevel& level : table.levels) {
    out << level.k << ',' << level.full_sum << ',' << level.filtered_sum << ','
        << level.good.size() << '\n';
  }
  return out.str();
}

}  // namespace orthochain
