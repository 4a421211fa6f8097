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

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace amimort {

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool is_defined(double v) { return !std::isnan(v); }

// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, else "".
// Undefined p renders as "".
std::string significance_stars(double p);

// Outcome of a hypothesis test. An undefined (NaN) p-value marks a
// degenerate input such as zero variance. `df2` is NaN for single-df tests.
struct TestResult {
  double statistic = kUndefined;
  double df1 = kUndefined;
  double df2 = kUndefined;
  double p_value = kUndefined;

  bool defined() const { return is_defined(p_value); }
  bool significant(double alpha = 0.05) const { return defined() && p_value < alpha; }
  std::string stars() const { return significance_stars(p_value); }
};

struct PairedTOptions {
  // Nadeau-Bengio corrected resampled t-test: the variance of the mean
  // difference is inflated by (1/n + n_test/n_train) instead of 1/n.
  bool corrected = false;
  double test_train_ratio = 1.0 / 9.0;
};

// Two-sided paired t-test on a - b, df = n - 1. Pairs where either value is
// NaN are dropped first. Zero-variance differences give an undefined p.
TestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                         const PairedTOptions& options = {});

// Two-sided two-sample t-test; Student (pooled variance) when `pooled`,
// Welch otherwise.
TestResult two_sample_t_test(std::span<const double> x, std::span<const double> y, bool pooled = true);

// Pearson chi-square on a 2x2 table, df = 1; `yates` applies the 0.5
// continuity correction (never driving |O - E| below zero). Throws
// ConfigError on a zero row or column total.
TestResult chi_square_2x2(const std::array<std::array<long, 2>, 2>& counts, bool yates = true);

// Row-major subjects x treatments matrix.
class Matrix2D {
 public:
  Matrix2D(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix2D(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Matrix2D from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct AnovaTable {
  double ss_treatment = 0.0;
  double ss_subject = 0.0;
  double ss_error = 0.0;
  double ms_error = 0.0;
  std::vector<double> treatment_means;
  TestResult test;  // F statistic with (k - 1, (k - 1)(n - 1)) df
};

// One-way repeated-measures ANOVA; rows are subjects, columns treatments.
// With SS_error = 0 and a treatment effect, F = inf and p = 0 (below
// machine precision); with neither, F and p are undefined.
AnovaTable rm_anova(const Matrix2D& data);

struct TukeyComparison {
  std::size_t first = 0;
  std::size_t second = 0;
  double mean_difference = 0.0;  // mean[first] - mean[second]
  double q_critical = 0.0;
  bool significant = false;
  TestResult test;  // statistic = q, df1 = k, df2 = error df
};

// Tukey HSD over all treatment pairs (i < j) using the repeated-measures
// error term: q = |mean_i - mean_j| / sqrt(MS_error / n).
std::vector<TukeyComparison> tukey_hsd(const Matrix2D& data, double alpha = 0.05);

double mean(std::span<const double> v);
// Sample standard deviation (n - 1 denominator); NaN for n < 2.
double sample_sd(std::span<const double> v);

}  // namespace amimort
