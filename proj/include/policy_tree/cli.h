// Copyright 2026 The policy_tree Authors.
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

#ifndef POLICY_TREE_CLI_H_
#define POLICY_TREE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace policy_tree {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitVerification = 3,
};

// Runs the ptree command line (train, predict, simulate, bench, verify).
// `args` excludes the program name. Diagnostics go to `err` as one line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace policy_tree

#endif  // POLICY_TREE_CLI_H_
