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

#ifndef GOK_IO_HPP
#define GOK_IO_HPP

#include <iosfwd>
#include <string>

namespace gok {

/// Version of every CSV and JSON layout written by this library.
inline constexpr int kSchemaVersion = 1;

/// printf-style %.12g; zero prints as "0".
std::string format_number(double value);

/// "# schema_version: 1" comment line that opens each CSV file.
void write_csv_preamble(std::ostream& out);

}  // namespace gok

#endif  // GOK_IO_HPP
