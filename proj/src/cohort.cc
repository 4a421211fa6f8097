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

#include "amimort/cohort.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <optional>
#include <set>

#include "amimort/csv.h"
#include "amimort/error.h"

namespace amimort {
namespace {

constexpr const char* kReferenceMapping = R"(# Column mapping for the public AMI cohort CSV.
# Left side: canonical feature name. Right side: raw CSV header.
# Header matching is case-insensitive. Adjust the right-hand sides if the
# downloaded file uses different headers.
feature.bPEP = bPEP
feature.bET = bET
feature.BMI = BMI
feature.ABI = ABI
feature.age = Age
feature.PCI = PCI
feature.sex = Sex
feature.dyslipidemia = Dyslipidemia
feature.diabetes = DM
feature.hypertension = HTN
feature.STEMI = STEMI

# sex: 1 = male
binary.sex = 1:1, 0:0

outcome.column = Death
outcome.positive = 1
outcome.negative = 0
)";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string location(const std::string& origin, std::size_t data_row, const std::string& column) {
  return origin + ": row " + std::to_string(data_row) + ", column '" + column + "'";
}

}  // namespace

SchemaMapping SchemaMapping::from_config(const KeyValueFile& config) {
  SchemaMapping m;
  m.column_map = config.with_prefix("feature.");
  for (const auto& [feature, coding] : config.with_prefix("binary.")) {
    std::map<std::string, int> codes;
    for (const auto& pair : split(coding, ',')) {
      const auto colon = pair.rfind(':');
      if (colon == std::string::npos) {
        throw ConfigError("mapping: binary." + feature + " expects raw:code pairs");
      }
      const std::string raw = trim(std::string_view(pair).substr(0, colon));
      const std::string code = trim(std::string_view(pair).substr(colon + 1));
      if (code != "0" && code != "1") {
        throw ConfigError("mapping: binary." + feature + " code must be 0 or 1, got '" + code + "'");
      }
      if (!codes.emplace(raw, code == "1" ? 1 : 0).second) {
        throw ConfigError("mapping: binary." + feature + " lists '" + raw + "' twice");
      }
    }
    m.binary_codings.emplace(feature, std::move(codes));
  }
  m.outcome_column = config.get("outcome.column").value_or("");
  m.positive_outcome_value = config.get("outcome.positive").value_or("");
  m.negative_outcome_value = config.get("outcome.negative").value_or("");
  if (m.outcome_column.empty()) throw ConfigError("mapping: outcome.column is required");
  if (m.positive_outcome_value.empty()) throw ConfigError("mapping: outcome.positive is required");
  return m;
}

SchemaMapping SchemaMapping::read(const std::filesystem::path& path) {
  return from_config(KeyValueFile::read(path));
}

const char* SchemaMapping::reference_default_text() { return kReferenceMapping; }

SchemaMapping SchemaMapping::reference_default() {
  return from_config(KeyValueFile::parse(kReferenceMapping, "<reference mapping>"));
}

void SchemaMapping::validate(const FeatureSchema& schema) const {
  std::set<std::string> raw_seen;
  for (const auto& entry : schema.entries()) {
    auto it = column_map.find(entry.name);
    if (it == column_map.end() || it->second.empty()) {
      throw ConfigError("mapping: feature '" + entry.name + "' is not mapped");
    }
    if (!raw_seen.insert(lower(it->second)).second) {
      throw ConfigError("mapping: raw column '" + it->second + "' mapped more than once");
    }
  }
  for (const auto& [name, raw] : column_map) {
    if (!schema.index_of(name)) throw ConfigError("mapping: unknown feature '" + name + "'");
  }
  if (raw_seen.contains(lower(outcome_column))) {
    throw ConfigError("mapping: outcome column '" + outcome_column + "' is also a feature");
  }
  for (const auto& [name, codes] : binary_codings) {
    auto idx = schema.index_of(name);
    if (!idx || schema[*idx].kind != FeatureKind::kBinary) {
      throw ConfigError("mapping: binary coding given for non-binary feature '" + name + "'");
    }
    if (codes.empty()) throw ConfigError("mapping: empty binary coding for '" + name + "'");
  }
  if (!negative_outcome_value.empty() && negative_outcome_value == positive_outcome_value) {
    throw ConfigError("mapping: outcome.positive and outcome.negative are identical");
  }
}

CohortTable::CohortTable(FeatureSchema schema, std::vector<std::vector<double>> features,
                         std::vector<int> outcomes)
    : schema_(std::move(schema)), features_(std::move(features)), outcomes_(std::move(outcomes)) {
  if (features_.size() != outcomes_.size()) {
    throw DataError("cohort: feature rows and outcomes differ in length");
  }
  for (std::size_t r = 0; r < features_.size(); ++r) {
    if (features_[r].size() != schema_.size()) {
      throw DataError("cohort: row " + std::to_string(r + 1) + " has wrong width");
    }
    for (std::size_t f = 0; f < schema_.size(); ++f) {
      const double v = features_[r][f];
      if (!std::isfinite(v)) throw DataError("cohort: non-finite value");
      if (schema_[f].kind == FeatureKind::kBinary && v != 0.0 && v != 1.0) {
        throw DataError("cohort: binary feature '" + schema_[f].name + "' must be 0 or 1");
      }
    }
    if (outcomes_[r] != 0 && outcomes_[r] != 1) throw DataError("cohort: outcome must be 0 or 1");
  }
}

std::size_t CohortTable::n_died() const {
  return static_cast<std::size_t>(std::accumulate(outcomes_.begin(), outcomes_.end(), 0));
}

CohortTable parse_cohort(std::string_view csv_text, const SchemaMapping& mapping,
                         const std::string& origin) {
  const FeatureSchema schema = FeatureSchema::canonical();
  mapping.validate(schema);

  auto records = csv::parse(csv_text);
  // Blank lines parse as a single empty field.
  std::erase_if(records, [](const csv::Record& r) { return r.size() == 1 && trim(r[0]).empty(); });
  if (records.empty()) throw DataError(origin + ": missing header row");

  const csv::Record& header = records.front();
  auto find_column = [&](const std::string& raw) -> std::size_t {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (lower(trim(header[c])) == lower(raw)) return c;
    }
    std::string available;
    for (const auto& h : header) available += (available.empty() ? "" : ", ") + trim(h);
    throw DataError(origin + ": mapped column '" + raw + "' not found (header has: " + available +
                    ")");
  };

  std::vector<std::size_t> feature_cols;
  for (const auto& entry : schema.entries()) feature_cols.push_back(find_column(mapping.column_map.at(entry.name)));
  const std::size_t outcome_col = find_column(mapping.outcome_column);

  std::vector<std::vector<double>> features;
  std::vector<int> outcomes;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const csv::Record& rec = records[r];
    if (rec.size() != header.size()) {
      throw DataError(origin + ": row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    std::vector<double> row(schema.size());
    for (std::size_t f = 0; f < schema.size(); ++f) {
      const std::string& raw_name = mapping.column_map.at(schema[f].name);
      const std::string cell = trim(rec[feature_cols[f]]);
      if (cell.empty()) throw DataError(location(origin, r, raw_name) + ": empty cell");
      if (schema[f].kind == FeatureKind::kNumeric) {
        auto v = parse_double(cell);
        if (!v) throw DataError(location(origin, r, raw_name) + ": non-numeric value '" + cell + "'");
        row[f] = *v;
        continue;
      }
      auto coding = mapping.binary_codings.find(schema[f].name);
      if (coding != mapping.binary_codings.end()) {
        auto it = coding->second.find(cell);
        if (it == coding->second.end()) {
          throw DataError(location(origin, r, raw_name) + ": unmappable binary value '" + cell + "'");
        }
        row[f] = it->second;
      } else {
        auto v = parse_double(cell);
        if (!v || (*v != 0.0 && *v != 1.0)) {
          throw DataError(location(origin, r, raw_name) + ": unmappable binary value '" + cell + "'");
        }
        row[f] = *v;
      }
    }
    const std::string out = trim(rec[outcome_col]);
    if (out.empty()) throw DataError(location(origin, r, mapping.outcome_column) + ": empty cell");
    if (out == mapping.positive_outcome_value) {
      outcomes.push_back(1);
    } else if (mapping.negative_outcome_value.empty() || out == mapping.negative_outcome_value) {
      outcomes.push_back(0);
    } else {
      throw DataError(location(origin, r, mapping.outcome_column) + ": unexpected outcome value '" +
                      out + "'");
    }
    features.push_back(std::move(row));
  }
  return CohortTable(schema, std::move(features), std::move(outcomes));
}

CohortTable load_cohort(const std::filesystem::path& csv_path, const SchemaMapping& mapping) {
  std::string text;
  {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + csv_path.string() + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  return parse_cohort(text, mapping, csv_path.string());
}

}  // namespace amimort
