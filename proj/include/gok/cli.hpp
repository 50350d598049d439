// Copyright 2026 The gok-bounds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOK_CLI_HPP
#define GOK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gok {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

/// Entry point of the gokb tool. Results go to `out` unless --out names a
/// file; diagnostics go to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" or "@path" (numbers separated by commas or whitespace).
std::vector<double> parse_vector(const std::string& text);

}  // namespace gok

#endif  // GOK_CLI_HPP
