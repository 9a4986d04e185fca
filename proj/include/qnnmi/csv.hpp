// Copyright 2026 The qnnmi Authors
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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qnnmi::csv {

std::string_view trim(std::string_view s);

/// Comma split with surrounding whitespace trimmed; no quoting support.
std::vector<std::string_view> split_line(std::string_view line);

std::optional<double> parse_double(std::string_view s);

/// Shortest round-trip representation; identical doubles give identical text.
std::string format_double(double v);

std::string join(const std::vector<std::string> &fields);

/// Lines of a text file, with trailing '\r' removed. Throws DataError if unreadable.
std::vector<std::string> read_lines(const std::string &path);

}  // namespace qnnmi::csv
