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
#include <vector>

#include "amimort/stats.h"

namespace amimort {

// Threshold metrics plus AUC. Ratios with a zero denominator, and the AUC
// of single-class labels, are kUndefined.
struct MetricSet {
  double auc = kUndefined;
  double accuracy = kUndefined;
  double sensitivity = kUndefined;
  double specificity = kUndefined;
  double precision = kUndefined;
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
};

// Predicts 1 when score >= threshold. Throws ConfigError on a length
// mismatch or empty input, DataError on labels other than 0/1.
MetricSet confusion_metrics(std::span<const double> scores, std::span<const int> labels, double threshold);

// Mann-Whitney form of the C-statistic with ties counted as one half,
// computed from mid-ranks in O(n log n).
double auc(std::span<const double> scores, std::span<const int> labels);

// confusion_metrics with the auc field filled in.
MetricSet evaluate(std::span<const double> scores, std::span<const int> labels, double threshold);

struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
  // Score threshold producing each point; the leading (0, 0) point has +inf.
  std::vector<double> thresholds;
};

// Sweeps thresholds over the distinct scores in descending order, from
// (0, 0) to (1, 1). Throws ConfigError for single-class labels.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

// Trapezoidal area under a curve given by its points.
double trapezoid(std::span<const double> x, std::span<const double> y);
double trapezoid(const RocCurve& curve);

// Vertical averaging on the FPR grid {0, step, ..., 1}. Each curve is
// linearly interpolated; where a curve has a vertical segment at a grid
// point the highest TPR is used. The result ends at (1, 1).
RocCurve mean_roc(const std::vector<RocCurve>& curves, double step = 0.01);

}  // namespace amimort
