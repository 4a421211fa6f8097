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

#include "amimort/importance.h"

#include <algorithm>
#include <numeric>

#include "amimort/csv.h"
#include "amimort/error.h"

namespace amimort {

double ImportanceReport::of(const std::string& feature) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i] == feature) return importance[i];
  }
  throw ConfigError("importance: no feature '" + feature + "' in report");
}

std::vector<std::string> ImportanceReport::ranked() const {
  std::vector<std::string> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) out[static_cast<std::size_t>(rank[i] - 1)] = features[i];
  return out;
}

std::vector<std::string> ImportanceReport::top(std::size_t k) const {
  auto r = ranked();
  r.resize(std::min(k, r.size()));
  return r;
}

std::vector<std::string> ImportanceReport::bottom(std::size_t k) const {
  auto r = ranked();
  r.erase(r.begin(), r.end() - static_cast<std::ptrdiff_t>(std::min(k, r.size())));
  return r;
}

ImportanceReport make_importance_report(std::string model, std::vector<std::string> features,
                                        std::vector<double> totals) {
  if (features.size() != totals.size()) throw ConfigError("importance: feature and value counts differ");
  ImportanceReport rep;
  rep.model = std::move(model);
  rep.features = std::move(features);
  const double sum = std::accumulate(totals.begin(), totals.end(), 0.0);
  const std::size_t p = totals.size();
  if (sum > 0.0) {
    for (double& v : totals) v /= sum;
  } else if (p > 0) {
    std::fill(totals.begin(), totals.end(), 1.0 / static_cast<double>(p));
    rep.warnings.push_back("importance: model made no splits; importances are uniform");
  }
  rep.importance = std::move(totals);

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rep.importance[a] != rep.importance[b]) return rep.importance[a] > rep.importance[b];
    return rep.features[a] < rep.features[b];
  });
  rep.rank.assign(p, 0);
  for (std::size_t k = 0; k < p; ++k) rep.rank[order[k]] = static_cast<int>(k + 1);
  return rep;
}

ImportanceReport model_importance(const TrainedModel& model) {
  if (!is_tree_based(model.algorithm())) {
    throw ConfigError("importance: impurity importance is defined for tree-based models only");
  }
  return make_importance_report(display_name(model.algorithm()), model.columns(), model.ledger().decrease);
}

ImportanceReport aggregate_importance(const std::vector<ImportanceReport>& reports) {
  if (reports.empty()) throw ConfigError("aggregate_importance: no reports");
  const auto& features = reports.front().features;
  std::vector<double> sum(features.size(), 0.0);
  for (const auto& r : reports) {
    if (r.features != features) throw ConfigError("aggregate_importance: reports cover different features");
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += r.importance[i];
  }
  for (double& v : sum) v /= static_cast<double>(reports.size());
  return make_importance_report(reports.front().model, features, std::move(sum));
}

std::string render_importance_csv(const ImportanceReport& report) {
  std::string out = csv::format_record({"feature", "importance", "rank"});
  for (const auto& name : report.ranked()) {
    const auto i = static_cast<std::size_t>(
        std::find(report.features.begin(), report.features.end(), name) - report.features.begin());
    out += csv::format_record({name, csv::format_number(report.importance[i]), std::to_string(report.rank[i])});
  }
  return out;
}

}  // namespace amimort
