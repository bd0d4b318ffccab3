/* Copyright 2026 The eot Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef EOT_TOOLS_CLI_HPP_
#define EOT_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace eot::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNotConverged = 3,
};

// Runs one invocation. `args` excludes the program name. Diagnostics go to
// `err` and end with "ERROR <code>: <message>" on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eot::cli

#endif  // EOT_TOOLS_CLI_HPP_
