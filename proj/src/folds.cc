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

#include "amimort/folds.h"

#include <algorithm>
#include <iterator>
#include <numeric>

#include "amimort/error.h"

namespace amimort {

namespace {
constexpr std::uint64_t kFoldStream = 0xF01D;

long class_count(std::span<const std::size_t> rows, std::span<const int> labels, int cls) {
  return std::count_if(rows.begin(), rows.end(), [&](std::size_t r) { return labels[r] == cls; });
}
}  // namespace

RowIndices OuterFold::inner_train(std::size_t k) const {
  RowIndices out;
  std::set_difference(train.begin(), train.end(), inner.at(k).begin(), inner.at(k).end(), std::back_inserter(out));
  return out;
}

std::vector<RowIndices> split_rows(std::span<const std::size_t> rows, std::span<const int> labels, int k,
                                   bool stratified, Rng& rng) {
  if (k < 2) throw ConfigError("folds: need at least 2 folds");
  if (rows.size() < static_cast<std::size_t>(k)) {
    throw ConfigError("folds: " + std::to_string(rows.size()) + " rows cannot form " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> layout;
  if (stratified) {
    for (int cls : {0, 1}) {
      std::vector<std::size_t> members;
      for (std::size_t r : rows) {
        if (labels[r] == cls) members.push_back(r);
      }
      shuffle(members, rng);
      layout.insert(layout.end(), members.begin(), members.end());
    }
  } else {
    layout.assign(rows.begin(), rows.end());
    shuffle(layout, rng);
  }
  std::vector<RowIndices> parts(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < layout.size(); ++i) parts[i % parts.size()].push_back(layout[i]);
  for (auto& p : parts) std::sort(p.begin(), p.end());
  return parts;
}

FoldPlan make_fold_plan(std::span<const int> labels, std::uint64_t master_seed, int repeat,
                        const FoldOptions& options) {
  if (options.n_outer < 2 || options.n_inner < 2) throw ConfigError("folds: n_outer and n_inner must be >= 2");
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("folds: labels must be 0 or 1");
  }
  FoldPlan plan;
  plan.repeat = repeat;
  RowIndices all(labels.size());
  std::iota(all.begin(), all.end(), std::size_t{0});

  bool stratified = options.stratified;
  const long min_class = std::min(class_count(all, labels, 0), class_count(all, labels, 1));
  if (stratified && min_class < options.n_outer) {
    stratified = false;
    plan.warnings.push_back("folds: smallest class has " + std::to_string(min_class) + " members, fewer than " +
                            std::to_string(options.n_outer) + " folds; using unstratified folds");
  }
  plan.stratified = stratified;

  Rng rng(derive_seed(master_seed, {kFoldStream, static_cast<std::uint64_t>(repeat)}));
  const auto tests = split_rows(all, labels, options.n_outer, stratified, rng);
  for (std::size_t f = 0; f < tests.size(); ++f) {
    OuterFold fold;
    fold.test = tests[f];
    std::set_difference(all.begin(), all.end(), fold.test.begin(), fold.test.end(), std::back_inserter(fold.train));
    Rng inner_rng(derive_seed(master_seed, {kFoldStream, static_cast<std::uint64_t>(repeat), f}));
    bool inner_stratified = stratified;
    const long inner_min = std::min(class_count(fold.train, labels, 0), class_count(fold.train, labels, 1));
    if (inner_stratified && inner_min < options.n_inner) {
      inner_stratified = false;
      plan.warnings.push_back("folds: outer fold " + std::to_string(f + 1) + " uses unstratified inner folds");
    }
    fold.inner = split_rows(fold.train, labels, options.n_inner, inner_stratified, inner_rng);
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

}  // namespace amimort
