// Copyright 2026 The dynenclave Authors
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

#ifndef DYNENCLAVE_CLI_HPP_
#define DYNENCLAVE_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "dynenclave/error.hpp"

namespace dynenclave {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitAttestation = 3,
  kExitTransport = 4,
  kExitRemote = 5,     // server answered with ERROR
  kExitPipeline = 6,   // local build/extract stage failed
  kExitChannel = 7,    // frame authentication or ordering
  kExitBench = 8,      // some benchmark points failed
};

int exit_code_for(const Error& e);

// The `dynenclave` client. `args` excludes the program name.
int run_client_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynenclave

#endif  // DYNENCLAVE_CLI_HPP_
