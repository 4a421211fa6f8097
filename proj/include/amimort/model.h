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
#include <variant>
#include <vector>

#include "amimort/cart.h"
#include "amimort/preprocess.h"

namespace amimort {

enum class Algorithm { kRandomForest, kAdaBoost, kGradBoost, kLogistic };

// Short identifiers used on the command line and in files: rf, adaboost,
// gradboost, lr.
const char* to_string(Algorithm a);
// Table labels: RF, AdaBoost, GradBoost, LR.
const char* display_name(Algorithm a);
Algorithm parse_algorithm(const std::string& text);
bool is_tree_based(Algorithm a);

struct ForestComponents {
  std::vector<Tree> trees;
  bool operator==(const ForestComponents&) const = default;
};

struct AdaBoostComponents {
  std::vector<Tree> stumps;
  std::vector<double> alphas;
  std::vector<double> errors;  // weighted error of each accepted round
  bool operator==(const AdaBoostComponents&) const = default;
};

struct GradBoostComponents {
  double base_score = 0.0;  // initial log-odds
  std::vector<Tree> trees;
  // Mean training logistic loss before the first round and after each one.
  std::vector<double> train_loss;
  bool operator==(const GradBoostComponents&) const = default;
};

struct LogisticComponents {
  double intercept = 0.0;
  std::vector<double> coefficients;
  bool converged = false;
  int iterations = 0;
  bool operator==(const LogisticComponents&) const = default;
};

using ModelComponents =
    std::variant<ForestComponents, AdaBoostComponents, GradBoostComponents, LogisticComponents>;

// Immutable fitted classifier.
class TrainedModel {
 public:
  TrainedModel(std::vector<std::string> columns, ModelComponents components, ImpurityLedger ledger,
               std::vector<std::string> warnings = {});

  Algorithm algorithm() const;
  const std::vector<std::string>& columns() const { return columns_; }
  const ModelComponents& components() const { return components_; }
  const ImpurityLedger& ledger() const { return ledger_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(components_);
  }

  // Positive-class score in [0, 1] for one encoded row.
  double score(std::span<const double> row) const;

  // Throws DataError listing missing and unexpected columns when the
  // matrix layout differs from the training layout.
  std::vector<double> predict_proba(const DesignMatrix& x) const;
  std::vector<int> predict(const DesignMatrix& x, double threshold = 0.5) const;

  bool operator==(const TrainedModel&) const = default;

 private:
  std::vector<std::string> columns_;
  ModelComponents components_;
  ImpurityLedger ledger_;
  std::vector<std::string> warnings_;
};

double sigmoid(double z);

}  // namespace amimort
