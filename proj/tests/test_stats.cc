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

#include <doctest.h>

#include <cmath>

#include "amimort/distributions.h"
#include "amimort/error.h"
#include "amimort/stats.h"
#include "synthetic.h"

using namespace amimort;

namespace {

std::vector<double> normals(Rng& rng, std::size_t n, double mean, double sd) {
  std::vector<double> v(n);
  for (auto& x : v) x = mean + sd * testing::normal(rng);
  return v;
}

// Rescales a sample to an exact mean and sd.
std::vector<double> with_moments(std::vector<double> v, double m, double s) {
  const double m0 = mean(v);
  const double s0 = sample_sd(v);
  for (auto& x : v) x = m + s * (x - m0) / s0;
  return v;
}

}  // namespace

TEST_CASE("significance stars") {
  CHECK(significance_stars(0.0005) == "***");
  CHECK(significance_stars(0.005) == "**");
  CHECK(significance_stars(0.03) == "*");
  CHECK(significance_stars(0.05) == "");
  CHECK(significance_stars(kUndefined) == "");
}

TEST_CASE("paired t-test") {
  const std::vector<double> a = {0.1, 0.2, 0.3};
  const std::vector<double> zero = {0, 0, 0};
  const auto r = paired_t_test(a, zero);
  CHECK(r.statistic == doctest::Approx(3.4641016151377557).epsilon(1e-14));
  CHECK(r.df1 == 2);
  CHECK(r.p_value == doctest::Approx(0.0741799002274485).epsilon(1e-10));
  CHECK(r.stars() == "");

  const auto same = paired_t_test(a, a);
  CHECK_FALSE(same.defined());

  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(paired_t_test(one, one), ConfigError);
  CHECK_THROWS_AS(paired_t_test(a, one), ConfigError);
}

TEST_CASE("paired t-test symmetry and NaN dropping") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = normals(rng, 3 + uniform_index(rng, 30), 0, 1);
    const auto b = normals(rng, a.size(), 0.2, 1);
    const auto ab = paired_t_test(a, b);
    const auto ba = paired_t_test(b, a);
    CHECK(ab.statistic == doctest::Approx(-ba.statistic).epsilon(1e-14));
    CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-14));
    CHECK(ab.p_value >= 0.0);
    CHECK(ab.p_value <= 1.0);
  }
  std::vector<double> a = {1, 2, 3, kUndefined, 5};
  std::vector<double> b = {0.5, 1.7, 2.1, 9, 4};
  const auto r = paired_t_test(a, b);
  CHECK(r.df1 == 3);
}

TEST_CASE("corrected resampled t-test inflates the variance") {
  Rng rng(2);
  const auto a = normals(rng, 100, 0.8, 0.1);
  const auto b = normals(rng, 100, 0.77, 0.1);
  PairedTOptions corrected;
  corrected.corrected = true;
  const auto plain = paired_t_test(a, b);
  const auto nb = paired_t_test(a, b, corrected);
  CHECK(std::abs(nb.statistic) < std::abs(plain.statistic));
  const double factor = std::sqrt((1.0 / 100) / (1.0 / 100 + 1.0 / 9.0));
  CHECK(nb.statistic == doctest::Approx(plain.statistic * factor).epsilon(1e-12));
}

TEST_CASE("two-sample t-test") {
  const std::vector<double> x = {1, 2, 3};
  auto r = two_sample_t_test(x, x);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(1.0));

  const std::vector<double> z = {0, 0};
  const std::vector<double> o = {1, 1};
  CHECK_FALSE(two_sample_t_test(z, o).defined());
  CHECK_FALSE(two_sample_t_test(z, o, false).defined());

  Rng rng(3);
  const auto died = with_moments(normals(rng, 87, 0, 1), 69.0, 12.0);
  const auto survived = with_moments(normals(rng, 52, 0, 1), 55.3, 11.5);
  r = two_sample_t_test(died, survived);
  CHECK(r.df1 == 137);
  CHECK(r.p_value < 0.001);
  CHECK(r.p_value == doctest::Approx(7.7e-10).epsilon(0.05));

  const auto bet_d = with_moments(normals(rng, 87, 0, 1), 250.0, 34.9);
  const auto bet_s = with_moments(normals(rng, 52, 0, 1), 262.4, 24.1);
  CHECK(two_sample_t_test(bet_d, bet_s).p_value == doctest::Approx(0.02547).epsilon(0.002));
  const auto welch = two_sample_t_test(bet_d, bet_s, false);
  CHECK(welch.p_value == doctest::Approx(0.0147).epsilon(0.02));
  CHECK(welch.df1 < 137);

  const std::vector<double> tiny = {1.0};
  CHECK_THROWS_AS(two_sample_t_test(tiny, x), ConfigError);
}

TEST_CASE("chi-square on 2x2 tables") {
  auto r = chi_square_2x2({{{10, 10}, {10, 10}}});
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);

  r = chi_square_2x2({{{60, 43}, {27, 9}}});
  CHECK(r.statistic == doctest::Approx(2.520249353919216).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.11239281098459879).epsilon(1e-10));
  CHECK(r.df1 == 1);

  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<std::array<long, 2>, 2> t{};
    for (auto& row : t) {
      for (auto& c : row) c = 1 + static_cast<long>(uniform_index(rng, 40));
    }
    auto d = t;
    for (auto& row : d) {
      for (auto& c : row) c *= 2;
    }
    const double a = chi_square_2x2(t, false).statistic;
    CHECK(chi_square_2x2(d, false).statistic == doctest::Approx(2 * a).epsilon(1e-12));
    CHECK(chi_square_2x2(t, true).statistic <= a + 1e-12);
  }
  CHECK_THROWS_AS(chi_square_2x2({{{0, 0}, {3, 4}}}), ConfigError);
  CHECK_THROWS_AS(chi_square_2x2({{{0, 5}, {0, 4}}}), ConfigError);
}

TEST_CASE("repeated-measures ANOVA example") {
  const auto m = Matrix2D::from_rows({{1, 2, 3}, {2, 3, 5}, {3, 4, 4}});
  const auto a = rm_anova(m);
  CHECK(a.test.statistic == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(a.test.df1 == 2);
  CHECK(a.test.df2 == 4);
  CHECK(a.test.p_value == doctest::Approx(0.03305785123966942).epsilon(1e-9));
  CHECK(a.ms_error == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(a.treatment_means == std::vector<double>{2.0, 3.0, 4.0});
}

TEST_CASE("ANOVA edge cases") {
  const auto flat = Matrix2D::from_rows({{1, 1, 1}, {2, 2, 2}, {5, 5, 5}});
  const auto f = rm_anova(flat);
  CHECK_FALSE(is_defined(f.test.statistic));

  const auto exact = Matrix2D::from_rows({{1, 2}, {3, 4}, {5, 6}});
  const auto e = rm_anova(exact);
  CHECK(std::isinf(e.test.statistic));
  CHECK(e.test.p_value == 0.0);

  const auto none = Matrix2D::from_rows({{1, 1}, {3, 3}});
  CHECK_FALSE(rm_anova(none).test.defined());

  CHECK_THROWS_AS(rm_anova(Matrix2D::from_rows({{1, 2, 3}})), ConfigError);
  CHECK_THROWS_AS(rm_anova(Matrix2D::from_rows({{1}, {2}})), ConfigError);
  CHECK_THROWS_AS(rm_anova(Matrix2D::from_rows({{1, kUndefined}, {2, 3}})), ConfigError);
}

TEST_CASE("adding a constant to a subject leaves F unchanged") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 10);
    const std::size_t k = 2 + uniform_index(rng, 4);
    Matrix2D m(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) m(i, j) = testing::normal(rng);
    }
    Matrix2D shifted = m;
    const std::size_t s = uniform_index(rng, n);
    for (std::size_t j = 0; j < k; ++j) shifted(s, j) += 17.5;
    CHECK(rm_anova(shifted).test.statistic == doctest::Approx(rm_anova(m).test.statistic).epsilon(1e-9));
  }
}

TEST_CASE("two-treatment ANOVA equals the squared paired t") {
  Rng rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 40);
    std::vector<double> a = normals(rng, n, 0, 1);
    std::vector<double> b = normals(rng, n, 0.3, 1);
    Matrix2D m(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, 0) = a[i];
      m(i, 1) = b[i];
    }
    const double t = paired_t_test(a, b).statistic;
    const auto an = rm_anova(m);
    CHECK(std::abs(an.test.statistic - t * t) <= 1e-9 * std::max(1.0, t * t));
    CHECK(an.test.p_value == doctest::Approx(paired_t_test(a, b).p_value).epsilon(1e-9));
  }
}

TEST_CASE("Tukey HSD example") {
  const auto m = Matrix2D::from_rows({{1, 2, 3}, {2, 3, 5}, {3, 4, 4}});
  const auto pairs = tukey_hsd(m, 0.05);
  REQUIRE(pairs.size() == 3);
  const auto& p02 = pairs[1];
  CHECK(p02.first == 0);
  CHECK(p02.second == 2);
  CHECK(p02.test.statistic == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(p02.mean_difference == doctest::Approx(-2.0));
  CHECK(p02.q_critical == doctest::Approx(5.040241254983202).epsilon(1e-6));
  CHECK(p02.significant);
  CHECK(p02.test.p_value == doctest::Approx(0.028556446240993627).epsilon(1e-5));
  CHECK_FALSE(pairs[0].significant);
  CHECK(pairs[0].test.statistic == doctest::Approx(3.0).epsilon(1e-12));

  const auto flat = Matrix2D::from_rows({{1, 1}, {2, 2.5}, {3, 2.5}});
  const auto f = tukey_hsd(flat);
  CHECK(f[0].test.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(f[0].significant);
}

TEST_CASE("two-treatment Tukey agrees with the paired t decision") {
  Rng rng(7);
  int agreements = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 20);
    std::vector<double> a = normals(rng, n, 0, 1);
    std::vector<double> b = normals(rng, n, 0.5 * uniform_real(rng), 1);
    Matrix2D m(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, 0) = a[i];
      m(i, 1) = b[i];
    }
    const bool t_sig = paired_t_test(a, b).significant(0.05);
    const auto tk = tukey_hsd(m, 0.05);
    CHECK(tk[0].significant == t_sig);
    CHECK(tk[0].test.p_value == doctest::Approx(paired_t_test(a, b).p_value).epsilon(1e-5));
    agreements += tk[0].significant == t_sig;
  }
  CHECK(agreements == 200);
}

TEST_CASE("mean and sd helpers") {
  const std::vector<double> v = {60, 70};
  CHECK(mean(v) == 65.0);
  CHECK(sample_sd(v) == doctest::Approx(7.07106781186547524400844362105).epsilon(1e-15));
  const std::vector<double> one = {3.0};
  CHECK_FALSE(is_defined(sample_sd(one)));
}
