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

#include "amimort/model.h"

namespace amimort {

// Normalized mean-decrease-impurity importances. `rank` is 1 for the most
// important feature; ties rank by feature name.
struct ImportanceReport {
  std::string model;
  std::vector<std::string> features;
  std::vector<double> importance;
  std::vector<int> rank;
  std::vector<std::string> warnings;

  double of(const std::string& feature) const;
  // Feature names ordered by rank.
  std::vector<std::string> ranked() const;
  std::vector<std::string> top(std::size_t k) const;
  std::vector<std::string> bottom(std::size_t k) const;
};

// Ledger of a tree-based model normalized to sum 1. Throws ConfigError for
// logistic models. An all-zero ledger yields uniform importances and a
// warning.
ImportanceReport model_importance(const TrainedModel& model);

// Builds a report from raw per-feature totals (normalizes and ranks).
ImportanceReport make_importance_report(std::string model, std::vector<std::string> features,
                                        std::vector<double> totals);

// Element-wise mean over reports, renormalized. Throws ConfigError on an
// empty list or differing feature lists.
ImportanceReport aggregate_importance(const std::vector<ImportanceReport>& reports);

// CSV with header feature,importance,rank in rank order.
std::string render_importance_csv(const ImportanceReport& report);

}  // namespace amimort
