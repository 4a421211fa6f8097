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

#include "amimort/model.h"
#include "amimort/preprocess.h"

namespace amimort {

struct LogisticParams {
  double l2_strength = 1.0;  // ridge penalty on coefficients; intercept is free
  int max_iterations = 100;
  double convergence_tol = 1e-8;

  void validate() const;
};

// Maximizes sum(log-likelihood) - l2/2 * |w|^2 by Newton (IRLS) steps with
// step halving; falls back to a gradient step when the Hessian cannot be
// factorized. `converged` is false when the iteration cap is reached.
TrainedModel fit_logistic(const DesignMatrix& x, const LogisticParams& params);

// Gradient of the penalized log-likelihood at (intercept, coefficients);
// element 0 is the intercept component.
std::vector<double> logistic_gradient(const DesignMatrix& x, double intercept,
                                      std::span<const double> coefficients, double l2_strength);

}  // namespace amimort
