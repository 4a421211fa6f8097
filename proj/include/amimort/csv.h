// Copyright 2026 The amimort Authors
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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace amimort::csv {

using Record = std::vector<std::string>;

// Parses comma-separated text with RFC 4180 quoting (double quotes, doubled
// quote escapes, embedded newlines inside quotes). CRLF and LF line endings
// are both accepted; a trailing newline does not produce an empty record.
std::vector<Record> parse(std::string_view text);

// Reads and parses a whole file. Throws DataError if it cannot be opened.
std::vector<Record> read_file(const std::filesystem::path& path);

// Quotes a field only when it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

std::string format_record(const Record& record);

// Shortest round-trip decimal representation; NaN renders as "NA".
std::string format_number(double value);

// Writes `content` to a sibling temporary file and renames it over `path`,
// so readers never observe a partially written file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace amimort::csv
