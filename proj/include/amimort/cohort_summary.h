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

#include <string>
#include <vector>

#include "amimort/cohort.h"
#include "amimort/stats.h"

namespace amimort {

struct SummaryOptions {
  bool pooled_t = true;  // Student t; false selects Welch
  bool yates = true;
  double alpha = 0.05;
};

// Per-outcome-group column of a summary row. Numeric features fill
// mean/sd, binary features fill count/percent (count of value 1).
struct GroupColumn {
  std::size_t n = 0;
  double mean = kUndefined;
  double sd = kUndefined;
  long count = 0;
  double percent = kUndefined;
};

struct SummaryRow {
  std::string feature;
  FeatureKind kind = FeatureKind::kNumeric;
  GroupColumn died;
  GroupColumn survived;
  TestResult test;  // t-test (numeric) or chi-square (binary)
  bool significant = false;
};

struct CohortSummary {
  std::size_t n_died = 0;
  std::size_t n_survived = 0;
  std::vector<SummaryRow> rows;  // schema order
};

// Degenerate groups (fewer than two members, zero variance, a zero
// marginal) produce an undefined p-value instead of an error.
CohortSummary cohort_summary(const CohortTable& cohort, const SummaryOptions& options = {});

std::string render_summary_csv(const CohortSummary& summary);
std::string render_summary_markdown(const CohortSummary& summary);

}  // namespace amimort
