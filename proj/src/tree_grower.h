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

// Shared greedy tree growth for classification trees and second-order
// boosting trees. A Policy supplies node statistics, split scoring, leaf
// values and candidate features:
//
//   using Stats = ...;
//   Stats empty() const;
//   void add(Stats&, std::size_t row) const;
//   Stats minus(const Stats& a, const Stats& b) const;            // a - b
//   bool can_split(const Stats&, std::size_t n_rows) const;
//   std::optional<double> gain(const Stats& parent, const Stats& left, std::size_t n_left,
//                              const Stats& right, std::size_t n_right) const;
//   double leaf_value(const Stats&) const;
//   double weight(const Stats&) const;
//   double ledger_credit(const Stats& node, const Stats& root, double gain) const;
//   std::vector<int> candidate_features(int depth, Rng&);

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "amimort/cart.h"
#include "amimort/preprocess.h"
#include "amimort/random.h"

namespace amimort::detail {

// Splits whose gain does not exceed this are treated as no improvement.
inline constexpr double kMinGain = 1e-12;
// Gains closer than this are ties, resolved by scan order.
inline constexpr double kTieTolerance = 1e-12;

// Row order of every column, ascending by value then row index. Computed
// once per matrix and shared by all trees fitted on it.
struct SortedColumns {
  explicit SortedColumns(const DesignMatrix& x);
  std::vector<std::vector<std::uint32_t>> order;
};

struct GrowLimits {
  int max_depth = kUnlimited;
  int max_leaf_nodes = kUnlimited;
};

inline double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  // Adjacent doubles: keep the threshold strictly below `hi`.
  return mid < hi ? mid : lo;
}

template <typename Policy>
class TreeGrower {
 public:
  using Stats = typename Policy::Stats;

  TreeGrower(const DesignMatrix& x, const SortedColumns& sorted, Policy& policy, GrowLimits limits)
      : x_(x), sorted_(sorted), policy_(policy), limits_(limits), owner_(x.n_rows, -1) {}

  // `rows` must be the rows participating in this tree (positive weight).
  FittedTree grow(std::span<const std::size_t> rows, Rng& rng) {
    nodes_.clear();
    ledger_ = ImpurityLedger(x_.n_cols());
    std::fill(owner_.begin(), owner_.end(), -1);

    Frontier root = make_node(std::vector<std::size_t>(rows.begin(), rows.end()), 0, rng);
    root_stats_ = root.stats;
    if (limits_.max_leaf_nodes == kUnlimited) {
      grow_depth_first(std::move(root), rng);
    } else {
      grow_best_first(std::move(root), rng);
    }
    return {Tree(std::move(nodes_), x_.n_cols()), std::move(ledger_)};
  }

  // Best split of a row set over the given features, without building a
  // tree. Used by the public best_split().
  std::optional<SplitCandidate> find_split(std::span<const std::size_t> rows,
                                           std::span<const int> features) {
    Stats stats = policy_.empty();
    for (std::size_t r : rows) policy_.add(stats, r);
    return scan(rows, stats, features, /*node_id=*/0);
  }

 private:
  struct Frontier {
    int id = -1;
    int depth = 0;
    std::vector<std::size_t> rows;
    Stats stats{};
    std::optional<SplitCandidate> split;
  };

  bool depth_allows_split(int depth) const {
    return limits_.max_depth == kUnlimited || depth < limits_.max_depth;
  }

  Frontier make_node(std::vector<std::size_t> rows, int depth, Rng& rng) {
    Frontier node;
    node.id = static_cast<int>(nodes_.size());
    node.depth = depth;
    node.rows = std::move(rows);
    node.stats = policy_.empty();
    for (std::size_t r : node.rows) policy_.add(node.stats, r);

    TreeNode tn;
    tn.value = policy_.leaf_value(node.stats);
    tn.weight = policy_.weight(node.stats);
    nodes_.push_back(tn);

    if (depth_allows_split(depth) && policy_.can_split(node.stats, node.rows.size())) {
      const std::vector<int> features = policy_.candidate_features(depth, rng);
      node.split = scan(node.rows, node.stats, features, node.id);
    }
    return node;
  }

  std::optional<SplitCandidate> scan(std::span<const std::size_t> rows, const Stats& parent,
                                     std::span<const int> features, int node_id) {
    for (std::size_t r : rows) owner_[r] = node_id;
    const std::size_t n = rows.size();
    std::optional<SplitCandidate> best;
    for (int f : features) {
      const auto& order = sorted_.order[static_cast<std::size_t>(f)];
      Stats left = policy_.empty();
      std::size_t n_left = 0;
      bool have_prev = false;
      double prev_value = 0.0;
      for (std::uint32_t r : order) {
        if (owner_[r] != node_id) continue;
        const double v = x_(r, static_cast<std::size_t>(f));
        if (have_prev && v > prev_value) {
          const Stats right = policy_.minus(parent, left);
          const auto g = policy_.gain(parent, left, n_left, right, n - n_left);
          if (g && *g > kMinGain && (!best || *g > best->gain + kTieTolerance)) {
            best = SplitCandidate{f, midpoint(prev_value, v), *g};
          }
        }
        policy_.add(left, r);
        ++n_left;
        have_prev = true;
        prev_value = v;
      }
    }
    for (std::size_t r : rows) owner_[r] = -1;
    return best;
  }

  // Turns the frontier node into an internal node and returns its children.
  std::pair<Frontier, Frontier> apply_split(Frontier& node, Rng& rng) {
    const SplitCandidate& s = *node.split;
    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : node.rows) {
      (x_(r, static_cast<std::size_t>(s.feature)) <= s.threshold ? left_rows : right_rows).push_back(r);
    }
    ledger_.decrease[static_cast<std::size_t>(s.feature)] +=
        policy_.ledger_credit(node.stats, root_stats_, s.gain);

    Frontier left = make_node(std::move(left_rows), node.depth + 1, rng);
    Frontier right = make_node(std::move(right_rows), node.depth + 1, rng);
    TreeNode& tn = nodes_[static_cast<std::size_t>(node.id)];
    tn.feature = s.feature;
    tn.threshold = s.threshold;
    tn.gain = s.gain;
    tn.left = left.id;
    tn.right = right.id;
    node.rows.clear();
    return {std::move(left), std::move(right)};
  }

  void grow_depth_first(Frontier node, Rng& rng) {
    if (!node.split) return;
    auto [left, right] = apply_split(node, rng);
    grow_depth_first(std::move(left), rng);
    grow_depth_first(std::move(right), rng);
  }

  void grow_best_first(Frontier root, Rng& rng) {
    auto worse = [](const Frontier& a, const Frontier& b) {
      if (a.split->gain != b.split->gain) return a.split->gain < b.split->gain;
      return a.id > b.id;
    };
    std::priority_queue<Frontier, std::vector<Frontier>, decltype(worse)> queue(worse);
    if (root.split) queue.push(std::move(root));
    int leaves = 1;
    while (!queue.empty() && leaves < limits_.max_leaf_nodes) {
      Frontier node = queue.top();
      queue.pop();
      auto [left, right] = apply_split(node, rng);
      ++leaves;
      if (left.split) queue.push(std::move(left));
      if (right.split) queue.push(std::move(right));
    }
  }

  const DesignMatrix& x_;
  const SortedColumns& sorted_;
  Policy& policy_;
  GrowLimits limits_;
  std::vector<int> owner_;
  std::vector<TreeNode> nodes_;
  ImpurityLedger ledger_;
  Stats root_stats_{};
};

// Classification-tree policy over weighted class counts.
class ImpurityPolicy {
 public:
  struct Stats {
    double neg = 0.0;
    double pos = 0.0;
  };

  ImpurityPolicy(const DesignMatrix& x, std::span<const double> weights, const TreeParams& params)
      : x_(x), weights_(weights), params_(params) {}

  Stats empty() const { return {}; }
  void add(Stats& s, std::size_t row) const {
    (x_.labels[row] == 1 ? s.pos : s.neg) += weights_[row];
  }
  Stats minus(const Stats& a, const Stats& b) const { return {a.neg - b.neg, a.pos - b.pos}; }

  bool can_split(const Stats& s, std::size_t n_rows) const {
    if (n_rows < static_cast<std::size_t>(params_.min_samples_split)) return false;
    if (n_rows < 2 * static_cast<std::size_t>(params_.min_samples_leaf)) return false;
    return s.neg > 0.0 && s.pos > 0.0;
  }

  std::optional<double> gain(const Stats& parent, const Stats& left, std::size_t n_left,
                             const Stats& right, std::size_t n_right) const {
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    if (n_left < min_leaf || n_right < min_leaf) return std::nullopt;
    const double wl = left.neg + left.pos;
    const double wr = right.neg + right.pos;
    const double w = parent.neg + parent.pos;
    if (!(wl > 0.0) || !(wr > 0.0)) return std::nullopt;
    return impurity(parent.neg, parent.pos, params_.criterion) -
           (wl / w) * impurity(std::max(left.neg, 0.0), std::max(left.pos, 0.0), params_.criterion) -
           (wr / w) * impurity(std::max(right.neg, 0.0), std::max(right.pos, 0.0), params_.criterion);
  }

  double leaf_value(const Stats& s) const {
    const double a = params_.leaf_pseudocount;
    const double total = s.neg + s.pos + 2.0 * a;
    return total > 0.0 ? (s.pos + a) / total : 0.5;
  }
  double weight(const Stats& s) const { return s.neg + s.pos; }

  double ledger_credit(const Stats& node, const Stats& root, double gain) const {
    return (weight(node) / weight(root)) * gain;
  }

  std::vector<int> candidate_features(int /*depth*/, Rng& rng) const {
    const int p = static_cast<int>(x_.n_cols());
    std::vector<int> all = iota_vector(p);
    if (params_.max_features == MaxFeatures::kAll) return all;
    const auto k = static_cast<std::size_t>(std::max(1, static_cast<int>(std::floor(std::sqrt(p)))));
    return sample_without_replacement(std::move(all), k, rng);
  }

 private:
  const DesignMatrix& x_;
  std::span<const double> weights_;
  const TreeParams& params_;
};

// Fits one classification tree reusing a precomputed column order.
FittedTree fit_tree_presorted(const DesignMatrix& x, const SortedColumns& sorted,
                              std::span<const double> weights, const TreeParams& params, Rng& rng);

}  // namespace amimort::detail
