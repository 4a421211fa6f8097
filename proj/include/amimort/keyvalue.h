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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amimort {

// Flat `key = value` text files. Blank lines and lines starting with '#'
// are ignored; keys and values are trimmed. Duplicate keys are an error.
class KeyValueFile {
 public:
  KeyValueFile() = default;

  static KeyValueFile parse(std::string_view text, std::string_view origin = "<string>");
  static KeyValueFile read(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

  // Keys starting with `prefix`, returned with the prefix stripped.
  std::map<std::string, std::string> with_prefix(std::string_view prefix) const;

  void set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }
  std::string render() const;

 private:
  std::map<std::string, std::string> entries_;
};

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delimiter);

}  // namespace amimort
