// Copyright 2026 The iontrap Authors
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

#pragma once

// RFC 4180 field quoting and '#'-prefixed metadata headers for CSV output.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace iontrap {

/// Quotes a field when it contains a comma, quote, CR or LF; embedded quotes
/// are doubled.
std::string csv_field(std::string_view value);

/// Joins fields with commas, quoting as needed, and terminates with CRLF.
std::string csv_row(const std::vector<std::string> &fields);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Writes each line as "# line\r\n".
void write_csv_comments(std::ostream &os, const std::vector<std::string> &lines);

}  // namespace iontrap
