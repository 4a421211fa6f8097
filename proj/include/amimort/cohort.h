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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "amimort/keyvalue.h"
#include "amimort/schema.h"

namespace amimort {

// How the raw CSV columns map onto the canonical schema.
//
// File format (flat key = value):
//   feature.<canonical name> = <raw header>
//   binary.<canonical name>  = <raw>:<0|1>, <raw>:<0|1>
//   outcome.column           = <raw header>
//   outcome.positive         = <raw value meaning "died">
//   outcome.negative         = <raw value meaning "survived">   (optional)
//
// Binary features without a `binary.` entry accept the raw values 0 and 1.
struct SchemaMapping {
  std::map<std::string, std::string> column_map;  // canonical -> raw header
  std::map<std::string, std::map<std::string, int>> binary_codings;
  std::string outcome_column;
  std::string positive_outcome_value;
  std::string negative_outcome_value;  // empty: any other value is "survived"

  static SchemaMapping from_config(const KeyValueFile& config);
  static SchemaMapping read(const std::filesystem::path& path);

  // Mapping for the public 139-patient AMI file. The raw header names are
  // the ones documented in data/reference_mapping.cfg.
  static SchemaMapping reference_default();
  static const char* reference_default_text();

  // Every canonical feature mapped exactly once, outcome column distinct
  // from the feature columns, codings map onto {0, 1}.
  void validate(const FeatureSchema& schema) const;
};

// Parsed and validated dataset. Immutable after construction.
class CohortTable {
 public:
  CohortTable(FeatureSchema schema, std::vector<std::vector<double>> features,
              std::vector<int> outcomes);

  const FeatureSchema& schema() const { return schema_; }
  std::size_t n_rows() const { return outcomes_.size(); }
  double value(std::size_t row, std::size_t feature) const { return features_[row][feature]; }
  std::span<const double> row(std::size_t r) const { return features_[r]; }
  // 1 = died, 0 = survived.
  int outcome(std::size_t row) const { return outcomes_[row]; }
  const std::vector<int>& outcomes() const { return outcomes_; }
  std::size_t n_died() const;
  std::size_t n_survived() const { return n_rows() - n_died(); }

  bool operator==(const CohortTable&) const = default;

 private:
  FeatureSchema schema_;
  std::vector<std::vector<double>> features_;
  std::vector<int> outcomes_;
};

// Loads the CSV and applies the mapping. Errors name the 1-based data row
// and the raw column.
CohortTable load_cohort(const std::filesystem::path& csv_path, const SchemaMapping& mapping);
CohortTable parse_cohort(std::string_view csv_text, const SchemaMapping& mapping,
                         const std::string& origin = "<string>");

}  // namespace amimort
