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

#include "amimort/schema.h"

#include <algorithm>
#include <set>

#include "amimort/error.h"
#include "amimort/keyvalue.h"

namespace amimort {

const char* to_string(FeatureKind kind) {
  return kind == FeatureKind::kNumeric ? "numeric" : "binary";
}

FeatureSchema::FeatureSchema(std::vector<FeatureEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.name.empty()) throw ConfigError("feature schema: empty feature name");
    if (!seen.insert(e.name).second) {
      throw ConfigError("feature schema: duplicate feature '" + e.name + "'");
    }
  }
}

FeatureSchema FeatureSchema::canonical() {
  using enum FeatureKind;
  return FeatureSchema({
      {"bPEP", kNumeric},
      {"bET", kNumeric},
      {"BMI", kNumeric},
      {"ABI", kNumeric},
      {"age", kNumeric},
      {"PCI", kBinary},
      {"sex", kBinary},
      {"dyslipidemia", kBinary},
      {"diabetes", kBinary},
      {"hypertension", kBinary},
      {"STEMI", kBinary},
  });
}

std::optional<std::size_t> FeatureSchema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t FeatureSchema::count(FeatureKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [kind](const FeatureEntry& e) { return e.kind == kind; }));
}

std::vector<std::string> FeatureSchema::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

void FeatureSchema::validate_mask(const AblationMask& mask) const {
  for (const auto& name : mask) {
    if (!index_of(name)) {
      throw ConfigError("cannot exclude unknown feature '" + name + "'");
    }
  }
}

FeatureSchema FeatureSchema::without(const AblationMask& mask) const {
  validate_mask(mask);
  std::vector<FeatureEntry> kept;
  for (const auto& e : entries_) {
    if (!mask.contains(e.name)) kept.push_back(e);
  }
  return FeatureSchema(std::move(kept));
}

AblationMask systolic_interval_mask() { return {"bPEP", "bET"}; }

AblationMask parse_mask(const std::string& text) {
  AblationMask mask;
  if (trim(text).empty()) return mask;
  for (auto& name : split(text, ',')) {
    if (!name.empty()) mask.insert(name);
  }
  return mask;
}

}  // namespace amimort
