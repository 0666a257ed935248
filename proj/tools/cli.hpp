// Copyright 2026 The qfg Authors
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

#ifndef QFG_TOOLS_CLI_HPP
#define QFG_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qfg::cli {

/// Runs the command line given as argument tokens (without the program
/// name). stdout carries data only; diagnostics go to stderr.
///
/// Exit codes: 0 success, 2 parse error, 3 semantic error, 4 oracle
/// mismatch, 5 resource guard.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace qfg::cli

#endif  // QFG_TOOLS_CLI_HPP
