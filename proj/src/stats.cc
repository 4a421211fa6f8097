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

#include "amimort/stats.h"

#include <algorithm>
#include <numeric>

#include "amimort/distributions.h"
#include "amimort/error.h"

namespace amimort {

std::string significance_stars(double p) {
  if (!is_defined(p)) return "";
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

double mean(std::span<const double> v) {
  if (v.empty()) return kUndefined;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return kUndefined;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

TestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                         const PairedTOptions& options) {
  if (a.size() != b.size()) throw ConfigError("paired t-test: samples differ in length");
  std::vector<double> d;
  d.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_defined(a[i]) && is_defined(b[i])) d.push_back(a[i] - b[i]);
  }
  if (d.size() < 2) throw ConfigError("paired t-test: need at least 2 complete pairs");

  const double n = static_cast<double>(d.size());
  const double m = mean(d);
  const double sd = sample_sd(d);
  TestResult r;
  r.df1 = n - 1.0;
  if (sd == 0.0) {
    r.statistic = m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m);
    return r;
  }
  const double variance_factor = options.corrected ? 1.0 / n + options.test_train_ratio : 1.0 / n;
  r.statistic = m / (sd * std::sqrt(variance_factor));
  r.p_value = dist::student_t_two_sided_p(r.statistic, r.df1);
  return r;
}

TestResult two_sample_t_test(std::span<const double> x, std::span<const double> y, bool pooled) {
  if (x.size() < 2 || y.size() < 2) throw ConfigError("two-sample t-test: each sample needs n >= 2");
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double vx = std::pow(sample_sd(x), 2);
  const double vy = std::pow(sample_sd(y), 2);
  const double diff = mean(x) - mean(y);

  TestResult r;
  double se = 0.0;
  if (pooled) {
    r.df1 = nx + ny - 2.0;
    const double pooled_var = ((nx - 1.0) * vx + (ny - 1.0) * vy) / r.df1;
    se = std::sqrt(pooled_var * (1.0 / nx + 1.0 / ny));
  } else {
    const double ax = vx / nx;
    const double ay = vy / ny;
    se = std::sqrt(ax + ay);
    r.df1 = (ax + ay) * (ax + ay) / (ax * ax / (nx - 1.0) + ay * ay / (ny - 1.0));
  }
  if (se == 0.0) {
    r.statistic = diff == 0.0 ? 0.0 : kUndefined;
    r.df1 = pooled ? r.df1 : kUndefined;
    return r;
  }
  r.statistic = diff / se;
  r.p_value = dist::student_t_two_sided_p(r.statistic, r.df1);
  return r;
}

TestResult chi_square_2x2(const std::array<std::array<long, 2>, 2>& counts, bool yates) {
  double row[2] = {0, 0};
  double col[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (counts[i][j] < 0) throw ConfigError("chi-square: negative count");
      row[i] += static_cast<double>(counts[i][j]);
      col[j] += static_cast<double>(counts[i][j]);
    }
  }
  const double total = row[0] + row[1];
  if (row[0] == 0 || row[1] == 0 || col[0] == 0 || col[1] == 0) {
    throw ConfigError("chi-square: table has a zero marginal total");
  }
  const double correction = yates ? 0.5 : 0.0;
  double chi2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected = row[i] * col[j] / total;
      const double dev = std::max(0.0, std::fabs(static_cast<double>(counts[i][j]) - expected) - correction);
      chi2 += dev * dev / expected;
    }
  }
  TestResult r;
  r.statistic = chi2;
  r.df1 = 1.0;
  r.p_value = dist::chi_squared_sf(chi2, 1.0);
  return r;
}

Matrix2D::Matrix2D(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw ConfigError("matrix: data size does not match shape");
}

Matrix2D Matrix2D::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix2D m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ConfigError("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

AnovaTable rm_anova(const Matrix2D& data) {
  const std::size_t n = data.rows();
  const std::size_t k = data.cols();
  if (n < 2 || k < 2) throw ConfigError("repeated-measures ANOVA: need >= 2 subjects and >= 2 treatments");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(data(i, j))) throw ConfigError("repeated-measures ANOVA: incomplete matrix");
    }
  }

  double grand = 0.0;
  std::vector<double> subject_means(n, 0.0);
  AnovaTable t;
  t.treatment_means.assign(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      subject_means[i] += data(i, j);
      t.treatment_means[j] += data(i, j);
      grand += data(i, j);
    }
  }
  for (auto& m : subject_means) m /= static_cast<double>(k);
  for (auto& m : t.treatment_means) m /= static_cast<double>(n);
  grand /= static_cast<double>(n * k);

  for (std::size_t j = 0; j < k; ++j) {
    t.ss_treatment += static_cast<double>(n) * std::pow(t.treatment_means[j] - grand, 2);
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.ss_subject += static_cast<double>(k) * std::pow(subject_means[i] - grand, 2);
  }
  // Residual (subject x treatment interaction), computed directly rather
  // than by subtraction to avoid cancellation.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double resid = data(i, j) - subject_means[i] - t.treatment_means[j] + grand;
      t.ss_error += resid * resid;
    }
  }

  const double df_treat = static_cast<double>(k - 1);
  const double df_error = static_cast<double>((k - 1) * (n - 1));
  t.ms_error = t.ss_error / df_error;
  t.test.df1 = df_treat;
  t.test.df2 = df_error;
  const double ms_treat = t.ss_treatment / df_treat;
  // Relative guard: residuals at rounding level count as zero.
  const double scale = std::max({t.ss_treatment, t.ss_subject, t.ss_error, 1e-300});
  if (t.ss_error <= 1e-28 * scale) {
    t.ss_error = 0.0;
    t.ms_error = 0.0;
    if (t.ss_treatment > 1e-28 * scale) {
      t.test.statistic = std::numeric_limits<double>::infinity();
      t.test.p_value = 0.0;
    }
    return t;
  }
  t.test.statistic = ms_treat / t.ms_error;
  t.test.p_value = dist::fisher_f_sf(t.test.statistic, df_treat, df_error);
  return t;
}

std::vector<TukeyComparison> tukey_hsd(const Matrix2D& data, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("Tukey HSD: alpha must be in (0, 1)");
  const AnovaTable anova = rm_anova(data);
  const std::size_t k = data.cols();
  const double n = static_cast<double>(data.rows());
  const double df_error = anova.test.df2;
  const double q_crit = dist::studentized_range_quantile(1.0 - alpha, static_cast<int>(k), df_error);
  const double se = std::sqrt(anova.ms_error / n);

  std::vector<TukeyComparison> out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      TukeyComparison c;
      c.first = i;
      c.second = j;
      c.mean_difference = anova.treatment_means[i] - anova.treatment_means[j];
      c.q_critical = q_crit;
      c.test.df1 = static_cast<double>(k);
      c.test.df2 = df_error;
      const double diff = std::fabs(c.mean_difference);
      if (diff == 0.0) {
        c.test.statistic = 0.0;
        c.test.p_value = 1.0;
      } else if (se == 0.0) {
        c.test.statistic = std::numeric_limits<double>::infinity();
        c.test.p_value = 0.0;
      } else {
        c.test.statistic = diff / se;
        c.test.p_value = std::clamp(dist::studentized_range_sf(c.test.statistic, static_cast<int>(k), df_error), 0.0, 1.0);
      }
      c.significant = c.test.statistic > q_crit;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace amimort
