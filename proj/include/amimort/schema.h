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

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace amimort {

enum class FeatureKind { kNumeric, kBinary };

const char* to_string(FeatureKind kind);

struct FeatureEntry {
  std::string name;
  FeatureKind kind;

  bool operator==(const FeatureEntry&) const = default;
};

// Names of features removed from a schema. Survivors keep their order.
using AblationMask = std::set<std::string>;

// Ordered predictor list. Names are unique.
class FeatureSchema {
 public:
  explicit FeatureSchema(std::vector<FeatureEntry> entries);

  // bPEP, bET, BMI, ABI, age (numeric) followed by PCI, sex, dyslipidemia,
  // diabetes, hypertension, STEMI (binary).
  static FeatureSchema canonical();

  const std::vector<FeatureEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const FeatureEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  std::size_t count(FeatureKind kind) const;
  std::vector<std::string> names() const;

  // Throws ConfigError naming the first masked feature that is not in the
  // schema.
  void validate_mask(const AblationMask& mask) const;
  FeatureSchema without(const AblationMask& mask) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<FeatureEntry> entries_;
};

// Removes the two systolic time intervals, bPEP and bET.
AblationMask systolic_interval_mask();

// Parses "a,b , c" into a mask; empty input gives an empty mask.
AblationMask parse_mask(const std::string& text);

}  // namespace amimort
