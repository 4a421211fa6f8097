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

#include <string>

#include "amimort/ensembles.h"
#include "amimort/error.h"
#include "ensemble_common.h"
#include "tree_grower.h"

namespace amimort {

void ForestParams::validate() const {
  if (n_estimators < 1) throw ConfigError("random forest: n_estimators must be >= 1");
  tree.validate();
}

TrainedModel fit_random_forest(const DesignMatrix& x, const ForestParams& params, Rng& rng) {
  params.validate();
  detail::require_two_classes(x, "random forest");
  const std::uint64_t master = rng();
  const detail::SortedColumns sorted(x);

  ForestComponents forest;
  ImpurityLedger ledger(x.n_cols());
  std::vector<double> weights(x.n_rows, 1.0);
  for (int t = 0; t < params.n_estimators; ++t) {
    Rng tree_rng(derive_seed(master, {static_cast<std::uint64_t>(t)}));
    if (params.bootstrap) {
      std::fill(weights.begin(), weights.end(), 0.0);
      for (std::size_t i = 0; i < x.n_rows; ++i) weights[uniform_index(tree_rng, x.n_rows)] += 1.0;
    }
    auto fitted = detail::fit_tree_presorted(x, sorted, weights, params.tree, tree_rng);
    ledger.add(fitted.ledger);
    forest.trees.push_back(std::move(fitted.tree));
  }
  return TrainedModel(x.columns, std::move(forest), std::move(ledger));
}

}  // namespace amimort
