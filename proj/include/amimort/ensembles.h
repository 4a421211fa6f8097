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

#include "amimort/cart.h"
#include "amimort/model.h"
#include "amimort/preprocess.h"
#include "amimort/random.h"

namespace amimort {

struct ForestParams {
  int n_estimators = 100;
  bool bootstrap = true;
  TreeParams tree{.max_features = MaxFeatures::kSqrt};

  void validate() const;
};

struct AdaBoostParams {
  int n_estimators = 50;
  double learning_rate = 1.0;
  TreeParams tree{.max_depth = 1};

  void validate() const;
};

struct GradBoostParams {
  int n_estimators = 100;
  int max_depth = 6;
  double eta = 0.3;
  double min_child_weight = 1.0;
  int max_leaf_nodes = kUnlimited;
  double subsample = 1.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double lambda = 1.0;
  double max_delta_step = 0.0;  // 0 leaves leaf weights uncapped
  double colsample_bytree = 1.0;
  double colsample_bylevel = 1.0;
  double colsample_bynode = 1.0;

  void validate() const;
};

// Each tree gets its own stream derived from one draw of `rng` and the tree
// index. Bootstrap resamples enter the tree as integer row weights.
TrainedModel fit_random_forest(const DesignMatrix& x, const ForestParams& params, Rng& rng);

// Discrete two-class AdaBoost over weighted trees (stumps by default).
TrainedModel fit_adaboost(const DesignMatrix& x, const AdaBoostParams& params, Rng& rng);

// Second-order boosting of the logistic loss.
TrainedModel fit_gradboost(const DesignMatrix& x, const GradBoostParams& params, Rng& rng);

// AdaBoost coefficient learning_rate * ln((1 - eps) / eps).
double adaboost_alpha(double weighted_error, double learning_rate);

// L1 soft threshold of a gradient sum: sign(G) * max(|G| - alpha, 0).
double soft_threshold(double g, double alpha);

// Unscaled optimal leaf weight -T(G) / (H + lambda), clipped to
// +-max_delta_step when that is nonzero. Multiply by eta for the stored value.
double gradboost_leaf_weight(double g, double h, const GradBoostParams& params);

// Structure score of a leaf with gradient sums (G, H); the split gain is
// half the children's scores minus the parent's, less gamma.
double gradboost_leaf_score(double g, double h, const GradBoostParams& params);

}  // namespace amimort
