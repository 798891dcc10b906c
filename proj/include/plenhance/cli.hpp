// Copyright 2026 The plenhance Authors.
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plenhance::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `plenhance` binary. `args` excludes the program
/// name. Subcommands: enhance, eval, synth, compare.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Worker threads for batch commands: hardware concurrency capped by the
/// PLE_THREADS environment variable when it holds a positive integer.
unsigned batch_threads();

}  // namespace plenhance::cli
