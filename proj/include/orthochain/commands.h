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

#ifndef ORTHOCHAIN_COMMANDS_H_
#define ORTHOCHAIN_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace orthochain {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitUsage = 2 };

// Resolved options for one command. Config file values are applied first,
// then explicit flags.
struct RunConfig {
  std::string command;
  std::optional<std::string> coeffs;  // file path or inline spec
  std::string depth = "auto";
  std::string measure = "uniform";  // uniform | optimize | file | inline JSON
  std::size_t paths = 100000;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out;
  int workers = 1;
  bool timestamp = true;
  int max_iters = 2000;
  double tol = 1e-8;
  int restarts = 8;
  std::string generator = "gaussian";
  int base_depth = 3;
  std::string suite = "all";
  int random_measures = 100;
  std::vector<std::string> functionals;  // empty selects all
};

// Keys accepted in a --config file.
const std::vector<std::string>& ConfigKeys();

// Runs one command line (without the program name). Reports go to --out or
// `out`; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Executes an already-resolved configuration.
int RunCommand(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace orthochain

#endif  // ORTHOCHAIN_COMMANDS_H_
