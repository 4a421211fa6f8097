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
#include <span>
#include <string>
#include <vector>

#include "amimort/cohort.h"

namespace amimort {

using RowIndices = std::vector<std::size_t>;

// Per-numeric-feature location and scale, fitted on a training subset.
struct Standardizer {
  std::vector<std::string> features;  // numeric features, schema order
  std::vector<double> means;
  std::vector<double> sds;  // sample sd (n - 1); 0 for constant or single-row input

  std::size_t index_of(const std::string& feature) const;
};

// Model input: encoded feature columns plus 0/1 labels (1 = died).
struct DesignMatrix {
  std::vector<std::string> columns;
  std::size_t n_rows = 0;
  std::vector<double> values;  // row-major n_rows x columns.size()
  std::vector<int> labels;
  // Cohort row each matrix row was taken from; lets callers audit which
  // patients reached a fitting routine.
  RowIndices source_rows;
  std::vector<std::string> warnings;

  std::size_t n_cols() const { return columns.size(); }
  double operator()(std::size_t r, std::size_t c) const { return values[r * columns.size() + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * columns.size(), columns.size()};
  }

  // Builds a matrix directly from values (tests, bindings). Validates shape,
  // finiteness and 0/1 labels.
  static DesignMatrix from_rows(std::vector<std::string> columns,
                                const std::vector<std::vector<double>>& rows, std::vector<int> labels);

  // Selects a subset of rows, preserving column layout.
  DesignMatrix subset(std::span<const std::size_t> rows) const;
};

RowIndices all_rows(const CohortTable& cohort);

// Mean and sample sd of every numeric feature over `rows` only.
Standardizer fit_standardizer(const CohortTable& cohort, std::span<const std::size_t> rows);

// Binary features become a single 0/1 indicator column; numeric features
// are z-scored with `standardizer` (a zero sd yields an all-zero column and
// a warning). Masked features are omitted; survivors keep schema order.
DesignMatrix encode(const CohortTable& cohort, std::span<const std::size_t> rows,
                    const Standardizer& standardizer, const AblationMask& mask = {});

// Column names encode() produces for a schema and mask.
std::vector<std::string> encoded_columns(const FeatureSchema& schema, const AblationMask& mask);

}  // namespace amimort
