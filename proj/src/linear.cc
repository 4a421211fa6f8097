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

#include "amimort/linear.h"

#include <Eigen/Dense>
#include <cmath>

#include "amimort/error.h"
#include "ensemble_common.h"

namespace amimort {

namespace {

constexpr int kMaxHalvings = 40;

// Design with a leading column of ones.
Eigen::MatrixXd augmented(const DesignMatrix& x) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(x.n_rows), static_cast<Eigen::Index>(x.n_cols() + 1));
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    a(static_cast<Eigen::Index>(r), 0) = 1.0;
    for (std::size_t c = 0; c < x.n_cols(); ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c + 1)) = x(r, c);
    }
  }
  return a;
}

double log1p_exp(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double l2) {
  const Eigen::VectorXd z = a * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) ll += y(i) * z(i) - log1p_exp(z(i));
  return ll - 0.5 * l2 * beta.tail(beta.size() - 1).squaredNorm();
}

Eigen::VectorXd gradient(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                         double l2, Eigen::VectorXd* w_out) {
  const Eigen::VectorXd z = a * beta;
  Eigen::VectorXd resid(z.size());
  if (w_out) w_out->resize(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double p = sigmoid(z(i));
    resid(i) = y(i) - p;
    if (w_out) (*w_out)(i) = p * (1.0 - p);
  }
  Eigen::VectorXd g = a.transpose() * resid;
  g.tail(g.size() - 1) -= l2 * beta.tail(beta.size() - 1);
  return g;
}

}  // namespace

void LogisticParams::validate() const {
  if (!(l2_strength >= 0.0) || !std::isfinite(l2_strength)) throw ConfigError("logistic: l2_strength must be >= 0");
  if (max_iterations < 1) throw ConfigError("logistic: max_iterations must be >= 1");
  if (!(convergence_tol > 0.0)) throw ConfigError("logistic: convergence_tol must be > 0");
}

std::vector<double> logistic_gradient(const DesignMatrix& x, double intercept,
                                      std::span<const double> coefficients, double l2_strength) {
  if (coefficients.size() != x.n_cols()) throw ConfigError("logistic_gradient: coefficient count mismatch");
  const Eigen::MatrixXd a = augmented(x);
  Eigen::VectorXd y(static_cast<Eigen::Index>(x.n_rows));
  for (std::size_t i = 0; i < x.n_rows; ++i) y(static_cast<Eigen::Index>(i)) = x.labels[i];
  Eigen::VectorXd beta(a.cols());
  beta(0) = intercept;
  for (std::size_t j = 0; j < coefficients.size(); ++j) beta(static_cast<Eigen::Index>(j + 1)) = coefficients[j];
  const Eigen::VectorXd g = gradient(a, y, beta, l2_strength, nullptr);
  return {g.data(), g.data() + g.size()};
}

TrainedModel fit_logistic(const DesignMatrix& x, const LogisticParams& params) {
  params.validate();
  detail::require_two_classes(x, "logistic regression");
  const Eigen::MatrixXd a = augmented(x);
  const Eigen::Index p = a.cols();
  Eigen::VectorXd y(a.rows());
  for (std::size_t i = 0; i < x.n_rows; ++i) y(static_cast<Eigen::Index>(i)) = x.labels[i];

  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p, params.l2_strength);
  penalty(0) = 0.0;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double obj = objective(a, y, beta, params.l2_strength);
  LogisticComponents fit;
  std::vector<std::string> warnings;

  for (int it = 1; it <= params.max_iterations; ++it) {
    fit.iterations = it;
    Eigen::VectorXd w;
    const Eigen::VectorXd g = gradient(a, y, beta, params.l2_strength, &w);
    Eigen::MatrixXd info = a.transpose() * w.asDiagonal() * a;
    info.diagonal() += penalty;

    Eigen::VectorXd step;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    const bool newton = llt.info() == Eigen::Success;
    if (newton) {
      step = llt.solve(g);
      if (!step.allFinite()) step = g;
    } else {
      step = g;
    }
    if (!newton && step.lpNorm<Eigen::Infinity>() == 0.0) break;
    // Near the optimum the objective change drops below rounding, so the
    // full Newton step is taken without a line search.
    if (newton && step.lpNorm<Eigen::Infinity>() < params.convergence_tol) {
      beta += step;
      fit.converged = true;
      break;
    }

    double t = 1.0;
    bool improved = false;
    Eigen::VectorXd candidate;
    double candidate_obj = obj;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      candidate = beta + t * step;
      candidate_obj = objective(a, y, candidate, params.l2_strength);
      if (std::isfinite(candidate_obj) && candidate_obj >= obj) {
        improved = true;
        break;
      }
    }
    if (!improved) break;
    beta = candidate;
    obj = candidate_obj;
  }
  if (!fit.converged) warnings.push_back("logistic: did not converge in " + std::to_string(fit.iterations) + " iterations");

  fit.intercept = beta(0);
  fit.coefficients.assign(beta.data() + 1, beta.data() + p);
  return TrainedModel(x.columns, std::move(fit), ImpurityLedger(x.n_cols()), std::move(warnings));
}

}  // namespace amimort
