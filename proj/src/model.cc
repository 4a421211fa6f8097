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

#include "amimort/model.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "amimort/error.h"

namespace amimort {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kRandomForest: return "rf";
    case Algorithm::kAdaBoost: return "adaboost";
    case Algorithm::kGradBoost: return "gradboost";
    case Algorithm::kLogistic: return "lr";
  }
  return "?";
}

const char* display_name(Algorithm a) {
  switch (a) {
    case Algorithm::kRandomForest: return "RF";
    case Algorithm::kAdaBoost: return "AdaBoost";
    case Algorithm::kGradBoost: return "GradBoost";
    case Algorithm::kLogistic: return "LR";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "rf") return Algorithm::kRandomForest;
  if (t == "adaboost") return Algorithm::kAdaBoost;
  if (t == "gradboost" || t == "xgb" || t == "xgboost") return Algorithm::kGradBoost;
  if (t == "lr") return Algorithm::kLogistic;
  throw ConfigError("unknown model '" + text + "' (expected rf, adaboost, gradboost or lr)");
}

bool is_tree_based(Algorithm a) { return a != Algorithm::kLogistic; }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

TrainedModel::TrainedModel(std::vector<std::string> columns, ModelComponents components,
                           ImpurityLedger ledger, std::vector<std::string> warnings)
    : columns_(std::move(columns)),
      components_(std::move(components)),
      ledger_(std::move(ledger)),
      warnings_(std::move(warnings)) {
  if (ledger_.decrease.empty()) ledger_ = ImpurityLedger(columns_.size());
  if (ledger_.decrease.size() != columns_.size()) throw DataError("model: ledger width differs from columns");
}

Algorithm TrainedModel::algorithm() const { return static_cast<Algorithm>(components_.index()); }

namespace {

struct Scorer {
  std::span<const double> row;

  double operator()(const ForestComponents& c) const {
    if (c.trees.empty()) return 0.5;
    double sum = 0.0;
    for (const auto& t : c.trees) sum += t.predict(row);
    return sum / static_cast<double>(c.trees.size());
  }
  double operator()(const AdaBoostComponents& c) const {
    double margin = 0.0;
    for (std::size_t i = 0; i < c.stumps.size(); ++i) {
      margin += c.alphas[i] * (c.stumps[i].predict(row) > 0.5 ? 1.0 : -1.0);
    }
    return sigmoid(margin);
  }
  double operator()(const GradBoostComponents& c) const {
    double margin = c.base_score;
    for (const auto& t : c.trees) margin += t.predict(row);
    return sigmoid(margin);
  }
  double operator()(const LogisticComponents& c) const {
    double z = c.intercept;
    for (std::size_t j = 0; j < c.coefficients.size(); ++j) z += c.coefficients[j] * row[j];
    return sigmoid(z);
  }
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

double TrainedModel::score(std::span<const double> row) const {
  if (row.size() != columns_.size()) {
    throw DataError("model: row has " + std::to_string(row.size()) + " values, model expects " +
                    std::to_string(columns_.size()));
  }
  return std::visit(Scorer{row}, components_);
}

std::vector<double> TrainedModel::predict_proba(const DesignMatrix& x) const {
  if (x.columns != columns_) {
    std::vector<std::string> missing;
    std::vector<std::string> unexpected;
    for (const auto& c : columns_) {
      if (std::find(x.columns.begin(), x.columns.end(), c) == x.columns.end()) missing.push_back(c);
    }
    for (const auto& c : x.columns) {
      if (std::find(columns_.begin(), columns_.end(), c) == columns_.end()) unexpected.push_back(c);
    }
    std::string msg = "model: column mismatch";
    if (!missing.empty()) msg += "; missing: " + join(missing);
    if (!unexpected.empty()) msg += "; unexpected: " + join(unexpected);
    if (missing.empty() && unexpected.empty()) msg += "; same columns in a different order";
    throw DataError(msg);
  }
  std::vector<double> out(x.n_rows);
  for (std::size_t r = 0; r < x.n_rows; ++r) out[r] = score(x.row(r));
  return out;
}

std::vector<int> TrainedModel::predict(const DesignMatrix& x, double threshold) const {
  std::vector<int> out;
  for (double s : predict_proba(x)) out.push_back(s >= threshold ? 1 : 0);
  return out;
}

}  // namespace amimort
