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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amimort/preprocess.h"
#include "amimort/random.h"

namespace amimort {

inline constexpr int kUnlimited = 0;

enum class Criterion { kGini, kEntropy };
enum class MaxFeatures { kAll, kSqrt };

const char* to_string(Criterion c);
const char* to_string(MaxFeatures m);
Criterion parse_criterion(const std::string& text);
// "auto" and "sqrt" both select kSqrt (classification convention).
MaxFeatures parse_max_features(const std::string& text);

struct TreeParams {
  int max_depth = kUnlimited;       // root has depth 0; kUnlimited = no bound
  int min_samples_split = 2;        // distinct rows required to split a node
  int min_samples_leaf = 1;         // distinct rows required in each child
  MaxFeatures max_features = MaxFeatures::kAll;
  Criterion criterion = Criterion::kGini;
  int max_leaf_nodes = kUnlimited;  // bounded growth is best-first by gain
  double leaf_pseudocount = 0.0;    // Laplace smoothing of leaf frequencies

  void validate() const;
};

// Flat node. Internal nodes route `row[feature] <= threshold` to `left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Leaf output: positive-class probability for classification trees,
  // additive score for boosting trees. Internal nodes keep the value they
  // would have had as a leaf.
  double value = 0.0;
  double weight = 0.0;  // weighted sample count (hessian sum for boosting)
  double gain = 0.0;    // split gain, 0 for leaves

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

class Tree {
 public:
  Tree() = default;
  Tree(std::vector<TreeNode> nodes, std::size_t n_features);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_leaves() const;
  int depth() const;

  // Throws DataError when the row width differs from the training width.
  const TreeNode& leaf_for(std::span<const double> row) const;
  double predict(std::span<const double> row) const { return leaf_for(row).value; }

  bool operator==(const Tree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
};

// Per-feature accumulated impurity decrease, each split credited with its
// gain times the node's share of the root weight.
struct ImpurityLedger {
  std::vector<double> decrease;

  ImpurityLedger() = default;
  explicit ImpurityLedger(std::size_t n_features) : decrease(n_features, 0.0) {}

  double total() const;
  void add(const ImpurityLedger& other, double scale = 1.0);
  bool operator==(const ImpurityLedger&) const = default;
};

// Gini (1 - p0^2 - p1^2) or entropy in bits; both lie in [0, 1]. Throws
// ConfigError for zero total weight.
double impurity(double weight_negative, double weight_positive, Criterion criterion);

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;  // parent impurity minus weighted child impurity
};

// Best split of `rows` (indices into x) over `candidate_features`.
// Thresholds are midpoints between consecutive distinct values. Returns
// nullopt when no split leaves min_samples_leaf rows on both sides with
// positive gain. Equal gains resolve to the lowest feature index, then the
// lowest threshold.
std::optional<SplitCandidate> best_split(const DesignMatrix& x, std::span<const std::size_t> rows,
                                         std::span<const double> weights,
                                         std::span<const int> candidate_features,
                                         const TreeParams& params);

struct FittedTree {
  Tree tree;
  ImpurityLedger ledger;
};

// Grows a classification tree on rows with positive weight. `weights` has
// one entry per matrix row. With max_features = sqrt each node draws
// floor(sqrt(n_cols)) candidate features from `rng`.
FittedTree fit_tree(const DesignMatrix& x, std::span<const double> weights, const TreeParams& params,
                    Rng& rng);

double predict_proba_tree(const Tree& tree, std::span<const double> row);

}  // namespace amimort
