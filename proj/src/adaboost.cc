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

#include <cmath>

#include "amimort/ensembles.h"
#include "amimort/error.h"
#include "ensemble_common.h"
#include "tree_grower.h"

namespace amimort {

namespace {
constexpr double kErrorFloor = 1e-10;
}

void AdaBoostParams::validate() const {
  if (n_estimators < 1) throw ConfigError("adaboost: n_estimators must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("adaboost: learning_rate must be positive");
  }
  tree.validate();
}

double adaboost_alpha(double weighted_error, double learning_rate) {
  const double eps = std::max(weighted_error, kErrorFloor);
  return learning_rate * std::log((1.0 - eps) / eps);
}

TrainedModel fit_adaboost(const DesignMatrix& x, const AdaBoostParams& params, Rng& rng) {
  params.validate();
  detail::require_two_classes(x, "adaboost");
  const std::uint64_t master = rng();
  const detail::SortedColumns sorted(x);
  const std::size_t n = x.n_rows;

  AdaBoostComponents boost;
  ImpurityLedger ledger(x.n_cols());
  std::vector<std::string> warnings;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<char> wrong(n);

  for (int round = 0; round < params.n_estimators; ++round) {
    Rng round_rng(derive_seed(master, {static_cast<std::uint64_t>(round)}));
    auto fitted = detail::fit_tree_presorted(x, sorted, w, params.tree, round_rng);

    double eps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int h = fitted.tree.predict(x.row(i)) > 0.5 ? 1 : 0;
      wrong[i] = h != x.labels[i];
      if (wrong[i]) eps += w[i];
    }
    if (eps >= 0.5) {
      if (boost.stumps.empty()) warnings.push_back("adaboost: first round no better than chance");
      break;
    }
    const double alpha = adaboost_alpha(eps, params.learning_rate);
    ledger.add(fitted.ledger, alpha);
    boost.stumps.push_back(std::move(fitted.tree));
    boost.alphas.push_back(alpha);
    boost.errors.push_back(eps);
    if (eps == 0.0) break;

    const double up = std::exp(alpha);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (wrong[i]) w[i] *= up;
      total += w[i];
    }
    for (double& wi : w) wi /= total;
  }
  return TrainedModel(x.columns, std::move(boost), std::move(ledger), std::move(warnings));
}

}  // namespace amimort
