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
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "amimort/metrics.h"
#include "amimort/model.h"

namespace amimort {

// One (repeat, outer fold, model, experiment) unit. Repeats and folds are
// 1-based in files and reports.
struct CellKey {
  int repeat = 1;
  int fold = 1;
  Algorithm model = Algorithm::kRandomForest;
  std::string experiment = "I";

  auto operator<=>(const CellKey& o) const {
    return std::tie(experiment, model, repeat, fold) <=> std::tie(o.experiment, o.model, o.repeat, o.fold);
  }
  bool operator==(const CellKey&) const = default;
};

struct MatrixEntry {
  CellKey key;
  std::string metric;
  double value = kUndefined;
  std::string params;
};

struct PredictionEntry {
  CellKey key;
  std::size_t row = 0;  // cohort row index
  int label = 0;
  double score = 0.0;
};

// Metric names stored per cell: the test metrics below, the same names
// prefixed with "train_", and "importance:<feature>" for tree models.
inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"auc", "accuracy", "sensitivity", "specificity", "precision"};
  return names;
}
double metric_value(const MetricSet& m, const std::string& name);

// Everything produced for one cell.
struct CellResult {
  CellKey key;
  std::string params;
  MetricSet test;
  MetricSet train;
  std::vector<std::string> columns;
  std::vector<double> importance;  // empty for logistic models
  std::vector<PredictionEntry> predictions;

  std::vector<MatrixEntry> entries() const;
};

// Long-format metric table indexed by cell and metric name.
class CvResultMatrix {
 public:
  void add(const CellResult& cell);
  void add_entry(MatrixEntry entry);
  void add_prediction(PredictionEntry p) { predictions_.push_back(std::move(p)); }

  // Sorted by (experiment, model, repeat, fold, metric).
  std::vector<MatrixEntry> entries() const;
  std::vector<PredictionEntry> predictions() const;

  std::set<CellKey> cells() const;
  std::vector<Algorithm> models() const;
  std::vector<std::string> experiments() const;
  std::set<std::string> metrics() const;

  // Values ordered by (repeat, fold); NaN where a cell lacks the metric.
  std::vector<double> values(Algorithm model, const std::string& experiment, const std::string& metric) const;
  std::vector<std::pair<int, int>> units(Algorithm model, const std::string& experiment) const;
  std::string params(const CellKey& key) const;

  // True when every (repeat, fold) unit exists for every model and
  // experiment present.
  bool complete(int n_repeats, int n_folds) const;

  std::string to_csv() const;
  std::string predictions_csv() const;
  // Parsers. `lenient` stops at the first malformed record instead of
  // throwing (used for checkpoint files that may end mid-line).
  static CvResultMatrix from_csv(const std::string& text, bool lenient = false);
  void load_predictions_csv(const std::string& text, bool lenient = false);

  static CvResultMatrix read(const std::filesystem::path& matrix_csv);

  // Keeps only entries and predictions of the given cells.
  CvResultMatrix restricted_to(const std::set<CellKey>& keep) const;

 private:
  std::map<std::pair<CellKey, std::string>, MatrixEntry> entries_;
  std::vector<PredictionEntry> predictions_;
};

inline constexpr const char* kCompleteMarker = "_complete";

// Single CSV lines (with trailing newline) in the matrix and predictions
// layouts.
std::string format_entry(const MatrixEntry& e);
std::string format_prediction(const PredictionEntry& p);

}  // namespace amimort
