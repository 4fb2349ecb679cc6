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

#include "orthochain/commands.h"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "orthochain/errors.h"
#include "orthochain/functionals.h"
#include "orthochain/measure_opt.h"
#include "orthochain/process_lab.h"
#include "orthochain/report_json.h"
#include "orthochain/series_core.h"
#include "orthochain/verify_suites.h"

namespace orthochain {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool IsFile(const std::string& s) {
  std::error_code ec;
  return !s.empty() && std::filesystem::is_regular_file(s, ec);
}

std::string Timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

// Loaded problem shared by the commands.
struct Problem {
  CoefficientSequence coeffs;
  IndexSet set;
  PartitionTree tree;
};

Problem LoadProblem(const RunConfig& c) {
  if (!c.coeffs) throw UsageError("--coeffs is required");
  CoefficientSequence coeffs =
      ParseCoefficientsText(IsFile(*c.coeffs) ? ReadFile(*c.coeffs) : *c.coeffs);
  IndexSet set = BuildIndexSet(coeffs);
  std::optional<int> depth;
  if (c.depth != "auto") {
    std::size_t used = 0;
    int k = -1;
    try {
      k = std::stoi(c.depth, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != c.depth.size()) {
      throw UsageError("--depth must be an integer or 'auto'");
    }
    depth = k;
  }
  PartitionTree tree = BuildPartition(set, depth);
  return Problem{std::move(coeffs), std::move(set), std::move(tree)};
}

// Full-depth tree for the functionals that need every level.
PartitionTree FullTree(const Problem& p) { return BuildPartition(p.set); }

OptimizerOptions OptimizerFrom(const RunConfig& c) {
  OptimizerOptions o;
  o.max_iters = c.max_iters;
  o.tolerance = c.tol;
  o.restarts = c.restarts;
  o.seed = c.seed.value_or(0);
  o.workers = c.workers;
  o.Validate();
  return o;
}

struct MeasureChoice {
  DiscreteMeasure measure;
  std::optional<OptimizationResult> optimization;
};

MeasureChoice LoadMeasure(const RunConfig& c, const IndexSet& set) {
  if (c.measure == "uniform") return {DiscreteMeasure::Uniform(set.size()), {}};
  if (c.measure == "optimize") {
    OptimizationResult r = MinimizeStrong(set, OptimizerFrom(c));
    DiscreteMeasure m = r.measure;
    return {std::move(m), std::move(r)};
  }
  std::string text;
  if (IsFile(c.measure)) {
    text = ReadFile(c.measure);
  } else if (!c.measure.empty() && (c.measure[0] == '[' || c.measure[0] == '{')) {
    text = c.measure;
  } else {
    throw UsageError("--measure must be uniform, optimize, or a JSON file");
  }
  Json spec;
  try {
    spec = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed measure JSON: ") + e.what());
  }
  DiscreteMeasure m = ParseMeasure(spec);
  if (m.size() != set.size()) {
    throw InvalidMeasureError("measure has " + std::to_string(m.size()) +
                              " weights but T has " + std::to_string(set.size()) +
                              " points");
  }
  return {std::move(m), {}};
}

std::uint64_t RequireSeed(const RunConfig& c) {
  if (!c.seed) throw UsageError("--seed is required for command '" + c.command + "'");
  return *c.seed;
}

Json ConfigEcho(const RunConfig& c) {
  Json j;
  j["depth"] = c.depth;
  j["measure"] = c.measure;
  j["paths"] = c.paths;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  return j;
}

Json Header(const RunConfig& c, const Problem* p) {
  Json j;
  j["version"] = kSchemaVersion;
  j["command"] = c.command;
  if (c.timestamp) j["timestamp"] = Timestamp();
  j["config"] = ConfigEcho(c);
  if (p != nullptr) j["coefficients"] = ToJson(p->coeffs);
  return j;
}

void Emit(const RunConfig& c, const std::string& body, std::ostream& out) {
  if (c.out.empty()) {
    out << body;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + c.out + "'");
  file << body;
}

void EmitJson(const RunConfig& c, const Json& j, std::ostream& out) {
  Emit(c, j.dump(2) + "\n", out);
}

void RequireJsonFormat(const RunConfig& c) {
  if (c.format != "json") {
    throw UsageError("--format csv is only available for per-level tables "
                     "(evaluate, classify)");
  }
}

void Warn(Json& warnings, std::ostream& err, const std::string& text) {
  warnings.push_back(text);
  err << "warning: " << text << "\n";
}

void TailWarning(const CoefficientSequence& coeffs, Json& warnings, std::ostream& err) {
  const auto tail = coeffs.TailMass();
  if (tail && !std::isfinite(*tail)) {
    Warn(warnings, err,
         "tail mass sum_{n>N} a_n^2 diverges; results describe the truncated set only");
  }
}

Json SelectFunctionals(const Json& full, const std::vector<std::string>& wanted) {
  if (wanted.empty()) return full;
  static const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
      {"strong", {"strong"}},
      {"weak", {"weak"}},
      {"dyadic", {"dyadic_bound", "weighted_point_dyadic", "per_level_full"}},
      {"filtered", {"filtered_sum", "filtered_bound", "L", "good_indices"}},
      {"rm", {"rademacher_menchov"}},
  };
  Json j;
  for (const auto& [group, keys] : groups) {
    if (std::find(wanted.begin(), wanted.end(), group) == wanted.end()) continue;
    for (const auto& key : keys) j[key] = full[key];
  }
  for (const char* key : {"separation_depth", "tail_mass", "tail_mass_infinite",
                          "main_constant"}) {
    j[key] = full[key];
  }
  return j;
}

// Sup of the per-point integral over points with positive weight.
double SupOverSupport(const DiscreteMeasure& m, const IndexSet& set) {
  double best = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (m[i] > 0) best = std::max(best, StrongFunctionalAt(m, set, i));
  }
  return best;
}

Json FunctionalsJson(const FunctionalReport& report, const DiscreteMeasure& m,
                     const IndexSet& set) {
  Json j = ToJson(report);
  j["strong"]["sup_over_support"] = Number(SupOverSupport(m, set));
  return j;
}

void ValidateFunctionals(const std::vector<std::string>& wanted) {
  for (const auto& w : wanted) {
    if (w != "strong" && w != "weak" && w != "dyadic" && w != "filtered" && w != "rm") {
      throw UsageError("unknown functional '" + w +
                       "' (expected strong, weak, dyadic, filtered, rm)");
    }
  }
}

int CmdBuild(const RunConfig& c, std::ostream& out, std::ostream&) {
  RequireJsonFormat(c);
  const Problem p = LoadProblem(c);
  Json j = Header(c, &p);
  j["index_set"] = ToJson(p.set);
  j["partition"] = ToJson(p.tree);
  EmitJson(c, j, out);
  return kExitOk;
}

int CmdEvaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  ValidateFunctionals(c.functionals);
  const Problem p = LoadProblem(c);
  const MeasureChoice mc = LoadMeasure(c, p.set);
  const FunctionalReport report = Evaluate(p.coeffs, p.set, p.tree, mc.measure);
  if (c.format == "csv") {
    Emit(c, PerLevelCsv(report.good), out);
    return kExitOk;
  }
  Json j = Header(c, &p);
  Json warnings = Json::array();
  TailWarning(p.coeffs, warnings, err);
  j["warnings"] = warnings;
  j["measure"] = ToJson(mc.measure);
  if (mc.optimization) j["optimizer"] = ToJson(*mc.optimization);
  j["functionals"] =
      SelectFunctionals(FunctionalsJson(report, mc.measure, p.set), c.functionals);
  EmitJson(c, j, out);
  return kExitOk;
}

int CmdClassify(const RunConfig& c, std::ostream& out, std::ostream&) {
  const Problem p = LoadProblem(c);
  const MeasureChoice mc = LoadMeasure(c, p.set);
  const GoodIndexTable table = ClassifyGoodIndices(mc.measure, p.tree);
  if (c.format == "csv") {
    Emit(c, PerLevelCsv(table), out);
    return kExitOk;
  }
  Json j = Header(c, &p);
  j["separation_depth"] = p.tree.separation_depth();
  j["good_indices"] = ToJson(table);
  EmitJson(c, j, out);
  return kExitOk;
}

int CmdOptimize(const RunConfig& c, std::ostream& out, std::ostream&) {
  RequireJsonFormat(c);
  RequireSeed(c);
  const Problem p = LoadProblem(c);
  const DualityGapReport gap = ComputeDualityGap(p.set, OptimizerFrom(c));
  const OptimizationResult strong = MinimizeStrong(p.set, OptimizerFrom(c));
  Json j = Header(c, &p);
  j["minimize_strong"] = ToJson(strong);
  j["duality_gap"] = ToJson(gap);
  EmitJson(c, j, out);
  return kExitOk;
}

int CmdSimulate(const RunConfig& c, std::ostream& out, std::ostream&) {
  RequireJsonFormat(c);
  const std::uint64_t seed = RequireSeed(c);
  const OrthonormalGenerator gen{ParseGeneratorKind(c.generator)};
  const Problem p = LoadProblem(c);
  const MeasureChoice mc = LoadMeasure(c, p.set);
  const ChainingReport rep =
      VerifyChainingBound(p.coeffs, mc.measure, gen, c.paths, seed, c.workers);
  Json j = Header(c, &p);
  j["generator"] = GeneratorName(gen.kind);
  j["chaining"] = ToJson(rep);
  EmitJson(c, j, out);
  return rep.skipped || rep.pass ? kExitOk : kExitAssertion;
}

int CmdAdversarial(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RequireJsonFormat(c);
  const std::uint64_t seed = RequireSeed(c);
  RunConfig full = c;
  full.depth = "auto";
  const Problem p = LoadProblem(full);
  const MeasureChoice mc = LoadMeasure(c, p.set);
  const LowerBoundReport rep =
      RunLowerBound(p.set, p.tree, mc.measure, c.base_depth, c.paths, seed, c.workers);
  Json j = Header(c, &p);
  Json warnings = Json::array();
  if (rep.clipped) {
    Warn(warnings, err, "base depth clipped to the tree depth " +
                            std::to_string(rep.base_depth));
  }
  j["warnings"] = warnings;
  j["lower_bound"] = ToJson(rep);
  EmitJson(c, j, out);
  return rep.pass ? kExitOk : kExitAssertion;
}

int CmdVerify(const RunConfig& c, std::ostream& out, std::ostream&) {
  RequireJsonFormat(c);
  if (c.suite != "all" &&
      std::find(SuiteNames().begin(), SuiteNames().end(), c.suite) == SuiteNames().end()) {
    throw UsageError("unknown suite '" + c.suite + "'");
  }
  if (c.suite != "skeleton") RequireSeed(c);
  if (c.random_measures < 1) throw UsageError("--random-measures must be positive");
  RunConfig full = c;
  full.depth = "auto";
  const Problem p = LoadProblem(full);
  const MeasureChoice mc = LoadMeasure(c, p.set);
  VerifyContext ctx;
  ctx.coeffs = &p.coeffs;
  ctx.set = &p.set;
  ctx.tree = &p.tree;
  ctx.measure = &mc.measure;
  ctx.random_draws = c.random_measures;
  ctx.seed = c.seed.value_or(0);
  ctx.paths = c.paths;
  ctx.workers = c.workers;
  ctx.base_depth = c.base_depth;
  const std::vector<SuiteResult> results = RunSuites(c.suite, ctx);
  Json suites = Json::array();
  bool pass = true;
  for (const SuiteResult& r : results) {
    suites.push_back(ToJson(r));
    pass = pass && r.pass();
  }
  Json j = Header(c, &p);
  j["suite"] = c.suite;
  j["pass"] = pass;
  j["suites"] = suites;
  EmitJson(c, j, out);
  return pass ? kExitOk : kExitAssertion;
}

// Runs `body`, prefixing any library error with the stage name.
template <typename F>
auto Stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw Error(name + ": " + e.what());
  }
}

int CmdPipeline(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RequireJsonFormat(c);
  const std::uint64_t seed = RequireSeed(c);
  const OrthonormalGenerator gen{ParseGeneratorKind(c.generator)};
  const Problem p = Stage("build", [&] { return LoadProblem(c); });
  const PartitionTree tree = Stage("build", [&] { return FullTree(p); });
  const MeasureChoice mc = Stage("optimize", [&] { return LoadMeasure(c, p.set); });
  const FunctionalReport report =
      Stage("evaluate", [&] { return Evaluate(p.coeffs, p.set, tree, mc.measure); });
  const ChainingReport chaining = Stage("chaining", [&] {
    return VerifyChainingBound(p.coeffs, mc.measure, gen, c.paths, seed, c.workers);
  });
  const LowerBoundReport lower = Stage("lowerbound", [&] {
    return RunLowerBound(p.set, tree, mc.measure, c.base_depth, c.paths, seed, c.workers);
  });

  Json j = Header(c, &p);
  Json warnings = Json::array();
  TailWarning(p.coeffs, warnings, err);
  if (lower.clipped) {
    Warn(warnings, err, "base depth clipped to the tree depth " +
                            std::to_string(lower.base_depth));
  }
  j["warnings"] = warnings;
  j["index_set"] = ToJson(p.set);
  j["measure"] = ToJson(mc.measure);
  if (mc.optimization) j["optimizer"] = ToJson(*mc.optimization);
  j["functionals"] = FunctionalsJson(report, mc.measure, p.set);
  j["generator"] = GeneratorName(gen.kind);
  j["chaining"] = ToJson(chaining);
  j["lower_bound"] = ToJson(lower);
  const bool pass = (chaining.skipped || chaining.pass) && lower.pass &&
                    report.good.last_good_level <= report.separation_depth + 1;
  j["pass"] = pass;
  EmitJson(c, j, out);
  return pass ? kExitOk : kExitAssertion;
}

void ApplyConfigFile(const std::string& path, RunConfig& c) {
  Json j;
  try {
    j = Json::parse(ReadFile(path));
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  const auto& keys = ConfigKeys();
  try {
    for (const auto& [key, v] : j.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw UsageError("unknown config key '" + key + "'");
      }
      if (key == "coeffs") {
        c.coeffs = v.is_string() ? v.get<std::string>() : v.dump();
      } else if (key == "depth") {
        c.depth = v.is_string() ? v.get<std::string>() : std::to_string(v.get<int>());
      } else if (key == "measure") {
        c.measure = v.is_string() ? v.get<std::string>() : v.dump();
      } else if (key == "paths") {
        c.paths = v.get<std::size_t>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "format") {
        c.format = v.get<std::string>();
      } else if (key == "out") {
        c.out = v.get<std::string>();
      } else if (key == "workers") {
        c.workers = v.get<int>();
      } else if (key == "timestamp") {
        c.timestamp = v.get<bool>();
      } else if (key == "max_iters") {
        c.max_iters = v.get<int>();
      } else if (key == "tol") {
        c.tol = v.get<double>();
      } else if (key == "restarts") {
        c.restarts = v.get<int>();
      } else if (key == "generator") {
        c.generator = v.get<std::string>();
      } else if (key == "base_depth") {
        c.base_depth = v.get<int>();
      } else if (key == "suite") {
        c.suite = v.get<std::string>();
      } else if (key == "random_measures") {
        c.random_measures = v.get<int>();
      } else if (key == "functionals") {
        c.functionals = v.get<std::vector<std::string>>();
      }
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
}

}  // namespace

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "coeffs",   "depth",     "measure",   "paths",      "seed",
      "format",   "out",       "workers",   "timestamp",  "max_iters",
      "tol",      "restarts",  "generator", "base_depth", "suite",
      "random_measures", "functionals"};
  return keys;
}

int RunCommand(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.workers < 1) throw UsageError("--workers must be at least 1");
    if (c.format != "json" && c.format != "csv") {
      throw UsageError("--format must be json or csv");
    }
    if (c.command == "build") return CmdBuild(c, out, err);
    if (c.command == "evaluate") return CmdEvaluate(c, out, err);
    if (c.command == "classify") return CmdClassify(c, out, err);
    if (c.command == "optimize") return CmdOptimize(c, out, err);
    if (c.command == "simulate") return CmdSimulate(c, out, err);
    if (c.command == "adversarial") return CmdAdversarial(c, out, err);
    if (c.command == "verify") return CmdVerify(c, out, err);
    if (c.command == "pipeline") return CmdPipeline(c, out, err);
    throw UsageError("unknown command '" + c.command + "'");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Majorizing-measure functionals and process checks for orthogonal series",
               "orthochain"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string coeffs;
  std::string config_path;
  std::string functionals;
  std::uint64_t seed = 0;
  bool no_timestamp = false;

  struct Spec {
    const char* name;
    const char* help;
  };
  const std::vector<Spec> commands = {
      {"build", "Build T and its 4-adic partition"},
      {"evaluate", "Evaluate the functionals for one measure"},
      {"classify", "List the good indices per level"},
      {"optimize", "Minimize the strong functional and bound the duality gap"},
      {"simulate", "Monte Carlo check of the chaining upper bound"},
      {"adversarial", "Monte Carlo check of the lower-bound construction"},
      {"verify", "Run a property suite"},
      {"pipeline", "Build, optimize, evaluate and run both bound checks"},
  };
  for (const Spec& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    const std::string name = s.name;
    sub->add_option("--coeffs", coeffs, "Coefficient file or inline spec");
    if (name == "adversarial") {
      sub->add_option("--depth", flags.base_depth, "Construction depth");
    } else {
      sub->add_option("--depth", flags.depth, "Partition depth K or auto");
    }
    sub->add_option("--measure", flags.measure, "uniform, optimize, or a JSON file");
    sub->add_option("--paths", flags.paths, "Monte Carlo paths");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--format", flags.format, "json or csv");
    sub->add_option("--out", flags.out, "Output path (default stdout)");
    sub->add_option("--workers", flags.workers, "Worker threads");
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp field");
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--max-iters", flags.max_iters, "Optimizer iterations");
    sub->add_option("--tol", flags.tol, "Optimizer tolerance");
    sub->add_option("--restarts", flags.restarts, "Optimizer restarts");
    sub->add_option("--generator", flags.generator, "gaussian, rademacher or trig");
    if (name != "adversarial") {
      sub->add_option("--base-depth", flags.base_depth, "Construction depth");
    }
    sub->add_option("--suite", flags.suite, "Property suite");
    sub->add_option("--random-measures", flags.random_measures, "Random measures per suite");
    sub->add_option("--functionals", functionals,
                    "Comma list of strong, weak, dyadic, filtered, rm");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig c;
  c.command = sub->get_name();
  if (c.command == "pipeline") c.measure = "optimize";
  try {
    if (!config_path.empty()) ApplyConfigFile(config_path, c);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  auto given = [&](const char* opt) { return sub->get_option(opt)->count() > 0; };
  if (given("--coeffs")) c.coeffs = coeffs;
  if (given("--depth")) {
    if (c.command == "adversarial") {
      c.base_depth = flags.base_depth;
    } else {
      c.depth = flags.depth;
    }
  }
  if (given("--measure")) c.measure = flags.measure;
  if (given("--paths")) c.paths = flags.paths;
  if (given("--seed")) c.seed = seed;
  if (given("--format")) c.format = flags.format;
  if (given("--out")) c.out = flags.out;
  if (given("--workers")) c.workers = flags.workers;
  if (no_timestamp) c.timestamp = false;
  if (given("--max-iters")) c.max_iters = flags.max_iters;
  if (given("--tol")) c.tol = flags.tol;
  if (given("--restarts")) c.restarts = flags.restarts;
  if (given("--generator")) c.generator = flags.generator;
  if (c.command != "adversarial" && given("--base-depth")) c.base_depth = flags.base_depth;
  if (given("--suite")) c.suite = flags.suite;
  if (given("--random-measures")) c.random_measures = flags.random_measures;
  if (given("--functionals")) {
    c.functionals.clear();
    std::stringstream in(functionals);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) c.functionals.push_back(item);
    }
  }
  return RunCommand(c, out, err);
}

}  // namespace orthochain
