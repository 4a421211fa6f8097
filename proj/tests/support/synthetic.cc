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

#include "synthetic.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "amimort/csv.h"

namespace amimort::testing {

namespace {

struct NumericProfile {
  const char* header;
  double died_mean, died_sd, survived_mean, survived_sd;
  int decimals;
};

struct BinaryProfile {
  const char* header;
  double died_rate, survived_rate;
};

constexpr NumericProfile kNumeric[] = {
    {"Age", 69.0, 12.0, 55.3, 11.5, 0},     {"bPEP", 96.6, 21.0, 94.8, 18.8, 1},
    {"bET", 250.0, 34.9, 262.4, 24.1, 1},   {"ABI", 0.94, 0.2, 1.04, 0.1, 3},
    {"BMI", 23.6, 3.9, 25.7, 3.1, 2},
};

constexpr BinaryProfile kBinary[] = {
    {"Sex", 60.0 / 87, 43.0 / 52},          {"DM", 21.0 / 87, 13.0 / 52},
    {"HTN", 45.0 / 87, 15.0 / 52},          {"Dyslipidemia", 30.0 / 87, 14.0 / 52},
    {"PCI", 33.0 / 87, 17.0 / 52},          {"STEMI", 18.0 / 87, 12.0 / 52},
};

std::vector<double> numeric_group(Rng& rng, std::size_t n, double mean, double sd, bool exact) {
  std::vector<double> v(n);
  for (auto& x : v) x = mean + sd * normal(rng);
  if (exact && n > 1) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    for (auto& x : v) x = mean + sd * (x - m) / s;
  }
  return v;
}

std::vector<int> binary_group(Rng& rng, std::size_t n, double rate) {
  const auto ones = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  std::vector<int> v(n, 0);
  std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(ones, n)), 1);
  shuffle(v, rng);
  return v;
}

std::string fixed(double v, int decimals) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(decimals);
  out << v;
  return out.str();
}

}  // namespace

double normal(Rng& rng) {
  double u = uniform_real(rng);
  while (u <= 0.0) u = uniform_real(rng);
  const double v = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

std::string synthetic_cohort_csv(const SyntheticCohortOptions& options) {
  Rng rng(options.seed);
  const std::size_t n = options.n_died + options.n_survived;
  std::vector<csv::Record> rows(n);

  for (const auto& p : kNumeric) {
    auto died = options.null_effect
                    ? numeric_group(rng, options.n_died, p.survived_mean, p.survived_sd, options.exact_moments)
                    : numeric_group(rng, options.n_died, p.died_mean, p.died_sd, options.exact_moments);
    auto survived = numeric_group(rng, options.n_survived, p.survived_mean, p.survived_sd, options.exact_moments);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = i < options.n_died ? died[i] : survived[i - options.n_died];
      rows[i].push_back(options.exact_moments ? csv::format_number(v) : fixed(v, p.decimals));
    }
  }
  for (const auto& p : kBinary) {
    auto died = binary_group(rng, options.n_died, options.null_effect ? p.survived_rate : p.died_rate);
    auto survived = binary_group(rng, options.n_survived, p.survived_rate);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].push_back(std::to_string(i < options.n_died ? died[i] : survived[i - options.n_died]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) rows[i].push_back(i < options.n_died ? "1" : "0");
  shuffle(rows, rng);

  csv::Record header;
  for (const auto& p : kNumeric) header.push_back(p.header);
  for (const auto& p : kBinary) header.push_back(p.header);
  header.push_back("Death");
  std::string text = csv::format_record(header);
  for (const auto& r : rows) text += csv::format_record(r);
  return text;
}

CohortTable synthetic_cohort(const SyntheticCohortOptions& options) {
  return parse_cohort(synthetic_cohort_csv(options), SchemaMapping::reference_default(), "<synthetic>");
}

DesignMatrix random_matrix(Rng& rng, std::size_t n_rows, std::size_t n_cols, int levels) {
  std::vector<std::string> columns;
  for (std::size_t c = 0; c < n_cols; ++c) columns.push_back("x" + std::to_string(c));
  std::vector<std::vector<double>> rows(n_rows, std::vector<double>(n_cols));
  std::vector<int> labels(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (auto& v : rows[r]) {
      v = levels > 0 ? static_cast<double>(uniform_index(rng, static_cast<std::uint64_t>(levels))) : normal(rng);
    }
    labels[r] = static_cast<int>(uniform_index(rng, 2));
  }
  if (n_rows >= 2) {
    labels[0] = 0;
    labels[1] = 1;
  }
  return DesignMatrix::from_rows(std::move(columns), rows, std::move(labels));
}

DesignMatrix separable_matrix(Rng& rng, std::size_t n_rows, std::size_t n_cols) {
  std::vector<double> w(n_cols);
  for (auto& v : w) v = normal(rng);
  std::vector<std::string> columns;
  for (std::size_t c = 0; c < n_cols; ++c) columns.push_back("x" + std::to_string(c));
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (rows.size() < n_rows) {
    std::vector<double> x(n_cols);
    for (auto& v : x) v = normal(rng);
    const double s = std::inner_product(x.begin(), x.end(), w.begin(), 0.0);
    if (std::abs(s) < 0.1) continue;
    const int y = s > 0.0 ? 1 : 0;
    // Force both classes into the first two rows.
    if (rows.size() < 2 && y != static_cast<int>(rows.size())) continue;
    rows.push_back(std::move(x));
    labels.push_back(y);
  }
  return DesignMatrix::from_rows(std::move(columns), rows, std::move(labels));
}

}  // namespace amimort::testing
