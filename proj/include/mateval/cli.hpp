// Copyright 2026 The mateval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MATEVAL_CLI_HPP_
#define MATEVAL_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mateval/model.hpp"
#include "mateval/options.hpp"
#include "mateval/pipeline.hpp"

namespace mateval {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitUpstream = 3,
};

struct RunConfig {
  enum class Command { kEvaluate, kBaseline, kExtract, kCorrelate, kValidate };

  Command command = Command::kEvaluate;
  std::filesystem::path gold_dir;
  std::filesystem::path pred_dir;
  std::filesystem::path validation_dir;
  std::filesystem::path docs_dir;
  std::filesystem::path out_dir;
  std::filesystem::path clients_file;
  std::filesystem::path transcript_file;
  std::filesystem::path human_file;
  std::filesystem::path auto_file;
  Domain domain = Domain::kPNC;
  PipelineMode mode = PipelineMode::kTextOnly;
  bool deplot = false;
  DecisionSwitches switches;
  std::uint64_t seed = 20240501;
  std::size_t permutations = 10000;
  std::size_t jobs = 4;
};

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_baseline(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_extract(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_correlate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses `args` (without the program name) and runs the chosen command.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mateval

#endif  // MATEVAL_CLI_HPP_
