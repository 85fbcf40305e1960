// Copyright 2026 The fourierqml Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Command-line front end. Every subcommand runs in-process through run() so
 * tests can drive it without spawning processes.
 *
 * Exit codes: 0 success, 2 usage or configuration error, 3 training
 * divergence, 4 capacity exceeded, 1 anything else.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fourierqml::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitCapacity = 4;

/// `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int main(int argc, char **argv);

} // namespace fourierqml::cli
