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

#include "amimort/preprocess.h"

#include <cmath>
#include <numeric>

#include "amimort/error.h"

namespace amimort {

std::size_t Standardizer::index_of(const std::string& feature) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i] == feature) return i;
  }
  throw ConfigError("standardizer: no statistics for feature '" + feature + "'");
}

DesignMatrix DesignMatrix::from_rows(std::vector<std::string> columns,
                                     const std::vector<std::vector<double>>& rows,
                                     std::vector<int> labels) {
  if (rows.size() != labels.size()) throw DataError("design matrix: rows and labels differ in length");
  DesignMatrix m;
  m.columns = std::move(columns);
  m.n_rows = rows.size();
  m.values.reserve(rows.size() * m.columns.size());
  for (const auto& r : rows) {
    if (r.size() != m.columns.size()) throw DataError("design matrix: row width does not match columns");
    for (double v : r) {
      if (!std::isfinite(v)) throw DataError("design matrix: non-finite entry");
      m.values.push_back(v);
    }
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("design matrix: labels must be 0 or 1");
  }
  m.labels = std::move(labels);
  m.source_rows.resize(m.n_rows);
  std::iota(m.source_rows.begin(), m.source_rows.end(), std::size_t{0});
  return m;
}

DesignMatrix DesignMatrix::subset(std::span<const std::size_t> rows) const {
  DesignMatrix m;
  m.columns = columns;
  m.n_rows = rows.size();
  m.values.reserve(rows.size() * columns.size());
  for (std::size_t r : rows) {
    if (r >= n_rows) throw DataError("design matrix: row index out of range");
    auto src = row(r);
    m.values.insert(m.values.end(), src.begin(), src.end());
    m.labels.push_back(labels[r]);
    m.source_rows.push_back(source_rows[r]);
  }
  m.warnings = warnings;
  return m;
}

RowIndices all_rows(const CohortTable& cohort) {
  RowIndices rows(cohort.n_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

Standardizer fit_standardizer(const CohortTable& cohort, std::span<const std::size_t> rows) {
  if (rows.empty()) throw ConfigError("fit_standardizer: empty subset");
  Standardizer s;
  const FeatureSchema& schema = cohort.schema();
  const double n = static_cast<double>(rows.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    if (schema[f].kind != FeatureKind::kNumeric) continue;
    double sum = 0.0;
    for (std::size_t r : rows) sum += cohort.value(r, f);
    const double m = sum / n;
    double ss = 0.0;
    for (std::size_t r : rows) ss += (cohort.value(r, f) - m) * (cohort.value(r, f) - m);
    s.features.push_back(schema[f].name);
    s.means.push_back(m);
    s.sds.push_back(rows.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
  }
  return s;
}

std::vector<std::string> encoded_columns(const FeatureSchema& schema, const AblationMask& mask) {
  schema.validate_mask(mask);
  std::vector<std::string> cols;
  for (const auto& e : schema.entries()) {
    if (!mask.contains(e.name)) cols.push_back(e.name);
  }
  return cols;
}

DesignMatrix encode(const CohortTable& cohort, std::span<const std::size_t> rows,
                    const Standardizer& standardizer, const AblationMask& mask) {
  const FeatureSchema& schema = cohort.schema();
  DesignMatrix m;
  m.columns = encoded_columns(schema, mask);
  m.n_rows = rows.size();

  struct Source {
    std::size_t feature;
    bool numeric;
    double mean;
    double sd;
  };
  std::vector<Source> sources;
  for (std::size_t f = 0; f < schema.size(); ++f) {
    if (mask.contains(schema[f].name)) continue;
    Source src{f, schema[f].kind == FeatureKind::kNumeric, 0.0, 1.0};
    if (src.numeric) {
      const std::size_t k = standardizer.index_of(schema[f].name);
      src.mean = standardizer.means[k];
      src.sd = standardizer.sds[k];
      if (!(src.sd > 0.0)) {
        m.warnings.push_back("feature '" + schema[f].name + "' has zero training sd; encoded as zeros");
      }
    }
    sources.push_back(src);
  }

  m.values.reserve(rows.size() * sources.size());
  for (std::size_t r : rows) {
    if (r >= cohort.n_rows()) throw DataError("encode: row index out of range");
    for (const auto& src : sources) {
      const double raw = cohort.value(r, src.feature);
      if (!src.numeric) {
        m.values.push_back(raw);
      } else if (src.sd > 0.0) {
        m.values.push_back((raw - src.mean) / src.sd);
      } else {
        m.values.push_back(0.0);
      }
    }
    m.labels.push_back(cohort.outcome(r));
    m.source_rows.push_back(r);
  }
  return m;
}

}  // namespace amimort
