// Copyright 2026 The cvgan Authors.
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

#ifndef CVGAN_TOOLS_CLI_H_
#define CVGAN_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cvgan {

// Runs one subcommand (synth, train, evaluate, generate, compare-dist,
// pcolor). args excludes the program name. Returns the process exit code;
// failures write a single line to err.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace cvgan

#endif  // CVGAN_TOOLS_CLI_H_
