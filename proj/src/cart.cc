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

#include "amimort/cart.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "amimort/error.h"
#include "tree_grower.h"

namespace amimort {

const char* to_string(Criterion c) { return c == Criterion::kGini ? "gini" : "entropy"; }
const char* to_string(MaxFeatures m) { return m == MaxFeatures::kAll ? "all" : "sqrt"; }

Criterion parse_criterion(const std::string& text) {
  if (text == "gini") return Criterion::kGini;
  if (text == "entropy") return Criterion::kEntropy;
  throw ConfigError("unknown criterion '" + text + "'");
}

MaxFeatures parse_max_features(const std::string& text) {
  if (text == "sqrt" || text == "auto") return MaxFeatures::kSqrt;
  if (text == "all" || text == "none") return MaxFeatures::kAll;
  throw ConfigError("unknown max_features '" + text + "'");
}

void TreeParams::validate() const {
  if (max_depth < 0) throw ConfigError("tree: max_depth must be positive or unlimited");
  if (min_samples_split < 2) throw ConfigError("tree: min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw ConfigError("tree: min_samples_leaf must be >= 1");
  if (max_leaf_nodes != kUnlimited && max_leaf_nodes < 2) {
    throw ConfigError("tree: max_leaf_nodes must be >= 2 or unlimited");
  }
  if (!(leaf_pseudocount >= 0.0)) throw ConfigError("tree: leaf_pseudocount must be >= 0");
}

Tree::Tree(std::vector<TreeNode> nodes, std::size_t n_features)
    : nodes_(std::move(nodes)), n_features_(n_features) {
  if (nodes_.empty()) throw DataError("tree: no nodes");
  const int n = static_cast<int>(nodes_.size());
  for (int i = 0; i < n; ++i) {
    const auto& node = nodes_[static_cast<std::size_t>(i)];
    if (node.is_leaf()) continue;
    // Children always follow their parent in the node list.
    if (node.feature >= static_cast<int>(n_features_) || node.left <= i || node.right <= i ||
        node.left >= n || node.right >= n) {
      throw DataError("tree: malformed internal node");
    }
  }
}

std::size_t Tree::n_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int Tree::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    if (node.is_leaf()) continue;
    depth[static_cast<std::size_t>(node.left)] = depth[i] + 1;
    depth[static_cast<std::size_t>(node.right)] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

const TreeNode& Tree::leaf_for(std::span<const double> row) const {
  if (row.size() != n_features_) {
    throw DataError("tree: row has " + std::to_string(row.size()) + " features, tree expects " +
                    std::to_string(n_features_));
  }
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    const int next = row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right;
    node = &nodes_[static_cast<std::size_t>(next)];
  }
  return *node;
}

double ImpurityLedger::total() const { return std::accumulate(decrease.begin(), decrease.end(), 0.0); }

void ImpurityLedger::add(const ImpurityLedger& other, double scale) {
  if (decrease.empty()) decrease.assign(other.decrease.size(), 0.0);
  if (other.decrease.size() != decrease.size()) throw Error("ledger: feature counts differ");
  for (std::size_t i = 0; i < decrease.size(); ++i) decrease[i] += scale * other.decrease[i];
}

double impurity(double weight_negative, double weight_positive, Criterion criterion) {
  const double total = weight_negative + weight_positive;
  if (!(total > 0.0)) throw ConfigError("impurity: total weight must be positive");
  const double p0 = weight_negative / total;
  const double p1 = weight_positive / total;
  if (criterion == Criterion::kGini) return std::max(0.0, 1.0 - p0 * p0 - p1 * p1);
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return std::clamp(h, 0.0, 1.0);
}

namespace detail {

SortedColumns::SortedColumns(const DesignMatrix& x) : order(x.n_cols()) {
  for (std::size_t c = 0; c < x.n_cols(); ++c) {
    auto& o = order[c];
    o.resize(x.n_rows);
    std::iota(o.begin(), o.end(), 0U);
    std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) { return x(a, c) < x(b, c); });
  }
}

FittedTree fit_tree_presorted(const DesignMatrix& x, const SortedColumns& sorted,
                              std::span<const double> weights, const TreeParams& params, Rng& rng) {
  params.validate();
  if (weights.size() != x.n_rows) throw ConfigError("fit_tree: one weight per row required");
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    if (weights[r] < 0.0 || !std::isfinite(weights[r])) throw ConfigError("fit_tree: weights must be finite and non-negative");
    if (weights[r] > 0.0) rows.push_back(r);
  }
  if (rows.empty()) throw TrainingError("fit_tree: all weights are zero");

  ImpurityPolicy policy(x, weights, params);
  TreeGrower<ImpurityPolicy> grower(x, sorted, policy, {params.max_depth, params.max_leaf_nodes});
  return grower.grow(rows, rng);
}

}  // namespace detail

std::optional<SplitCandidate> best_split(const DesignMatrix& x, std::span<const std::size_t> rows,
                                         std::span<const double> weights,
                                         std::span<const int> candidate_features,
                                         const TreeParams& params) {
  params.validate();
  if (weights.size() != x.n_rows) throw ConfigError("best_split: one weight per row required");
  for (int f : candidate_features) {
    if (f < 0 || static_cast<std::size_t>(f) >= x.n_cols()) throw ConfigError("best_split: feature out of range");
  }
  std::vector<int> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  const detail::SortedColumns sorted(x);
  detail::ImpurityPolicy policy(x, weights, params);
  detail::TreeGrower<detail::ImpurityPolicy> grower(x, sorted, policy, {params.max_depth, params.max_leaf_nodes});
  return grower.find_split(rows, features);
}

FittedTree fit_tree(const DesignMatrix& x, std::span<const double> weights, const TreeParams& params, Rng& rng) {
  const detail::SortedColumns sorted(x);
  return detail::fit_tree_presorted(x, sorted, weights, params, rng);
}

double predict_proba_tree(const Tree& tree, std::span<const double> row) { return tree.predict(row); }

}  // namespace amimort
