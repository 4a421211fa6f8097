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
#include <map>
#include <numeric>

#include "amimort/ensembles.h"
#include "amimort/error.h"
#include "ensemble_common.h"
#include "tree_grower.h"

namespace amimort {

namespace {

bool is_fraction(double f) { return f > 0.0 && f <= 1.0; }

std::size_t column_count(double fraction, std::size_t available) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(available)));
  return std::max<std::size_t>(1, std::min(k, available));
}

std::vector<int> subsample_columns(const std::vector<int>& pool, double fraction, Rng& rng) {
  const std::size_t k = column_count(fraction, pool.size());
  if (k >= pool.size()) return pool;
  return sample_without_replacement(pool, k, rng);
}

// Second-order statistics policy for TreeGrower.
class GradientPolicy {
 public:
  struct Stats {
    double g = 0.0;
    double h = 0.0;
  };

  GradientPolicy(std::span<const double> grad, std::span<const double> hess, const GradBoostParams& params,
                 std::vector<int> tree_columns)
      : grad_(grad), hess_(hess), params_(params), tree_columns_(std::move(tree_columns)) {}

  Stats empty() const { return {}; }
  void add(Stats& s, std::size_t row) const {
    s.g += grad_[row];
    s.h += hess_[row];
  }
  Stats minus(const Stats& a, const Stats& b) const { return {a.g - b.g, a.h - b.h}; }

  bool can_split(const Stats& s, std::size_t n_rows) const {
    return n_rows >= 2 && s.h >= 2.0 * params_.min_child_weight;
  }

  std::optional<double> gain(const Stats& parent, const Stats& left, std::size_t /*n_left*/,
                             const Stats& right, std::size_t /*n_right*/) const {
    if (left.h < params_.min_child_weight || right.h < params_.min_child_weight) return std::nullopt;
    return 0.5 * (gradboost_leaf_score(left.g, left.h, params_) + gradboost_leaf_score(right.g, right.h, params_) -
                  gradboost_leaf_score(parent.g, parent.h, params_)) -
           params_.gamma;
  }

  double leaf_value(const Stats& s) const { return params_.eta * gradboost_leaf_weight(s.g, s.h, params_); }
  double weight(const Stats& s) const { return s.h; }
  double ledger_credit(const Stats&, const Stats&, double gain) const { return gain; }

  std::vector<int> candidate_features(int depth, Rng& rng) {
    auto it = level_columns_.find(depth);
    if (it == level_columns_.end()) {
      it = level_columns_.emplace(depth, subsample_columns(tree_columns_, params_.colsample_bylevel, rng)).first;
    }
    return subsample_columns(it->second, params_.colsample_bynode, rng);
  }

 private:
  std::span<const double> grad_;
  std::span<const double> hess_;
  const GradBoostParams& params_;
  std::vector<int> tree_columns_;
  std::map<int, std::vector<int>> level_columns_;
};

double mean_log_loss(std::span<const double> margin, std::span<const int> labels) {
  double sum = 0.0;
  for (std::size_t i = 0; i < margin.size(); ++i) {
    // log(1 + exp(-s)) with s the signed margin, computed stably.
    const double s = labels[i] == 1 ? margin[i] : -margin[i];
    sum += s > 0.0 ? std::log1p(std::exp(-s)) : -s + std::log1p(std::exp(s));
  }
  return sum / static_cast<double>(margin.size());
}

}  // namespace

void GradBoostParams::validate() const {
  if (n_estimators < 0) throw ConfigError("gradboost: n_estimators must be >= 0");
  if (max_depth < 0) throw ConfigError("gradboost: max_depth must be positive or unlimited");
  if (max_leaf_nodes != kUnlimited && max_leaf_nodes < 2) {
    throw ConfigError("gradboost: max_leaf_nodes must be >= 2 or unlimited");
  }
  if (!(eta >= 0.0) || !(gamma >= 0.0) || !(alpha >= 0.0) || !(lambda >= 0.0) || !(min_child_weight >= 0.0) ||
      !(max_delta_step >= 0.0)) {
    throw ConfigError("gradboost: eta, gamma, alpha, lambda, min_child_weight and max_delta_step must be >= 0");
  }
  if (!is_fraction(subsample) || !is_fraction(colsample_bytree) || !is_fraction(colsample_bylevel) ||
      !is_fraction(colsample_bynode)) {
    throw ConfigError("gradboost: subsample and colsample fractions must lie in (0, 1]");
  }
}

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

double gradboost_leaf_weight(double g, double h, const GradBoostParams& params) {
  const double denom = h + params.lambda;
  if (!(denom > 0.0)) return 0.0;
  double w = -soft_threshold(g, params.alpha) / denom;
  if (params.max_delta_step > 0.0) w = std::clamp(w, -params.max_delta_step, params.max_delta_step);
  return w;
}

double gradboost_leaf_score(double g, double h, const GradBoostParams& params) {
  const double denom = h + params.lambda;
  if (!(denom > 0.0)) return 0.0;
  if (params.max_delta_step == 0.0) {
    const double t = soft_threshold(g, params.alpha);
    return t * t / denom;
  }
  // Objective reduction at the clipped weight; equals T(G)^2 / (H + lambda)
  // when the clip is inactive.
  const double w = gradboost_leaf_weight(g, h, params);
  return -(2.0 * g * w + denom * w * w + 2.0 * params.alpha * std::abs(w));
}

TrainedModel fit_gradboost(const DesignMatrix& x, const GradBoostParams& params, Rng& rng) {
  params.validate();
  detail::require_two_classes(x, "gradboost");
  const std::uint64_t master = rng();
  const detail::SortedColumns sorted(x);
  const std::size_t n = x.n_rows;

  double positives = 0.0;
  for (int y : x.labels) positives += y;
  const double base_rate = positives / static_cast<double>(n);

  GradBoostComponents boost;
  boost.base_score = std::log(base_rate / (1.0 - base_rate));
  ImpurityLedger ledger(x.n_cols());

  std::vector<double> margin(n, boost.base_score);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  const std::vector<std::size_t> all_rows = [&] {
    std::vector<std::size_t> r(n);
    std::iota(r.begin(), r.end(), std::size_t{0});
    return r;
  }();
  const std::size_t n_sub = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(params.subsample * static_cast<double>(n))));
  boost.train_loss.push_back(mean_log_loss(margin, x.labels));

  for (int round = 0; round < params.n_estimators; ++round) {
    Rng round_rng(derive_seed(master, {static_cast<std::uint64_t>(round)}));
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - x.labels[i];
      hess[i] = p * (1.0 - p);
    }
    const std::vector<std::size_t> rows =
        n_sub >= n ? all_rows : sample_without_replacement(all_rows, n_sub, round_rng);
    GradientPolicy policy(grad, hess, params,
                          subsample_columns(iota_vector(static_cast<int>(x.n_cols())), params.colsample_bytree,
                                            round_rng));
    detail::TreeGrower<GradientPolicy> grower(x, sorted, policy, {params.max_depth, params.max_leaf_nodes});
    auto fitted = grower.grow(rows, round_rng);

    for (std::size_t i = 0; i < n; ++i) margin[i] += fitted.tree.predict(x.row(i));
    ledger.add(fitted.ledger);
    boost.trees.push_back(std::move(fitted.tree));
    boost.train_loss.push_back(mean_log_loss(margin, x.labels));
  }
  return TrainedModel(x.columns, std::move(boost), std::move(ledger));
}

}  // namespace amimort
