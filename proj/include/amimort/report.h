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

#include <span>
#include <string>
#include <vector>

#include "amimort/importance.h"
#include "amimort/metrics.h"
#include "amimort/result_matrix.h"
#include "amimort/stats.h"

namespace amimort {

// Mean and sample sd over the defined values; n counts them.
struct SummaryStat {
  double mean = kUndefined;
  double sd = kUndefined;
  std::size_t n = 0;
};
SummaryStat summarize(std::span<const double> values);

// Values of two (model, experiment) series at their shared (repeat, fold)
// units where both are defined, in unit order.
std::pair<std::vector<double>, std::vector<double>> paired_values(const CvResultMatrix& m, Algorithm model_a,
                                                                  const std::string& experiment_a, Algorithm model_b,
                                                                  const std::string& experiment_b,
                                                                  const std::string& metric);

struct PerformanceRow {
  Algorithm model;
  std::vector<SummaryStat> stats;     // one per metric
  std::vector<TestResult> vs_baseline;  // paired t against LR; empty without a baseline
};

struct PerformanceTable {
  std::string experiment;
  bool train = false;
  std::vector<std::string> metrics;
  bool has_baseline = false;
  std::vector<PerformanceRow> rows;
};

// Mean +- sd over cells per model. When LR and at least one other model
// are present, every other model carries a paired t-test against LR.
PerformanceTable performance_table(const CvResultMatrix& m, const std::string& experiment, bool train = false,
                                   const PairedTOptions& options = {});
std::string render_performance_markdown(const PerformanceTable& t);
std::string render_performance_csv(const PerformanceTable& t);

struct AblationRow {
  Algorithm model;
  std::string metric;
  SummaryStat first;
  SummaryStat second;
  TestResult test;  // paired t on first - second
};

std::vector<AblationRow> ablation_table(const CvResultMatrix& m, const std::string& first,
                                        const std::string& second, bool train = false,
                                        const PairedTOptions& options = {});
std::string render_ablation_markdown(const std::vector<AblationRow>& rows, const std::string& first,
                                     const std::string& second);
std::string render_ablation_csv(const std::vector<AblationRow>& rows);

struct AnovaReport {
  std::string metric;
  std::vector<Algorithm> models;
  std::size_t subjects = 0;
  AnovaTable anova;
  std::vector<TukeyComparison> tukey;
};

// Repeated-measures ANOVA and Tukey HSD across the tree-based models, with
// (repeat, fold) units as subjects. Empty when fewer than two tree models
// are present.
std::vector<AnovaReport> anova_reports(const CvResultMatrix& m, const std::string& experiment,
                                       double alpha = 0.05);
std::string render_anova_markdown(const std::vector<AnovaReport>& reports);

// Vertical average of the per-cell test ROC curves.
RocCurve mean_test_roc(const CvResultMatrix& m, Algorithm model, const std::string& experiment,
                       double step = 0.01);
std::string render_roc_csv(const RocCurve& curve);

// Mean of the per-cell importances, renormalized.
ImportanceReport cv_importance(const CvResultMatrix& m, Algorithm model, const std::string& experiment);

// "0.83 +- 0.10" style cell text.
std::string format_mean_sd(const SummaryStat& s, int decimals = 2);

}  // namespace amimort
