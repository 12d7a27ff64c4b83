// Copyright 2026 The seedlen Authors
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

#ifndef SEEDLEN_CLI_H
#define SEEDLEN_CLI_H

#include <iosfwd>

namespace seedlen {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidConfig = 2,
    kExitInfeasible = 3,
    kExitIoFailure = 4,
};

/// Parses argv and runs one subcommand. Artifacts go to --output (or to
/// $SEEDLEN_OUTPUT_DIR/<command>.<ext>, or to `out` when neither is set);
/// the one-line summary goes to `out` when the artifact went to a file and
/// to `err` otherwise. Errors are reported on `err` as a JSON document.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace seedlen

#endif
