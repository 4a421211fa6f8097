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

#include "amimort/distributions.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "amimort/error.h"

namespace amimort::dist {
namespace {

using boost::math::quadrature::gauss_kronrod;

// Beyond this many error degrees of freedom the studentizing factor is
// treated as the constant 1.
constexpr double kLargeDf = 1e5;

void require_df(double df, const char* what) {
  if (!(df > 0.0)) throw ConfigError(std::string(what) + ": degrees of freedom must be positive");
}

double upper_normal(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
double lower_normal(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// P(range of k iid N(0,1) <= w).
double normal_range_cdf(double w, int k) {
  if (w <= 0.0) return 0.0;
  const double km1 = k - 1;
  auto integrand = [&](double z) {
    // Phi(z) - Phi(z - w), evaluated on whichever tail avoids cancellation.
    const double mass = z > 0.5 * w ? upper_normal(z - w) - upper_normal(z)
                                     : lower_normal(z) - lower_normal(z - w);
    if (mass <= 0.0) return 0.0;
    const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return density * std::pow(mass, km1);
  };
  // The normal density is below 1e-16 outside [-8.5, 8.5].
  double value = gauss_kronrod<double, 31>::integrate(integrand, -8.5, 0.0, 15, 1e-13) +
                 gauss_kronrod<double, 31>::integrate(integrand, 0.0, 8.5, 15, 1e-13);
  value *= k;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

double student_t_cdf(double t, double df) {
  require_df(df, "student t");
  if (std::isinf(df)) return boost::math::cdf(boost::math::normal(), t);
  return boost::math::cdf(boost::math::students_t(df), t);
}

double student_t_two_sided_p(double t, double df) {
  require_df(df, "student t");
  const double a = std::fabs(t);
  if (std::isinf(df)) return 2.0 * upper_normal(a);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), a)));
}

double fisher_f_cdf(double x, double df1, double df2) {
  require_df(df1, "F");
  require_df(df2, "F");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::cdf(boost::math::fisher_f(df1, df2), x);
}

double fisher_f_sf(double x, double df1, double df2) {
  require_df(df1, "F");
  require_df(df2, "F");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), x));
}

double chi_squared_cdf(double x, double df) {
  require_df(df, "chi-squared");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::cdf(boost::math::chi_squared(df), x);
}

double chi_squared_sf(double x, double df) {
  require_df(df, "chi-squared");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

double studentized_range_cdf(double q, int k, double df) {
  if (k < 2) throw ConfigError("studentized range: k must be at least 2");
  require_df(df, "studentized range");
  if (!(q > 0.0)) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (df >= kLargeDf) return normal_range_cdf(q, k);

  // s = sqrt(chi^2_df / df) has density
  //   df^(df/2) / (Gamma(df/2) 2^(df/2 - 1)) s^(df - 1) exp(-df s^2 / 2).
  const double log_norm =
      0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::log(2.0);
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double log_density = log_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
    return std::exp(log_density) * normal_range_cdf(q * s, k);
  };
  const boost::math::chi_squared chi(df);
  const double tail = 1e-15;
  const double s_lo = std::sqrt(boost::math::quantile(chi, tail) / df);
  const double s_hi = std::sqrt(boost::math::quantile(boost::math::complement(chi, tail)) / df);
  // Split at the mode so that the adaptive rule sees the peak.
  const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.5 * (s_lo + s_hi);
  const double value = gauss_kronrod<double, 31>::integrate(integrand, s_lo, mode, 15, 1e-12) +
                       gauss_kronrod<double, 31>::integrate(integrand, mode, s_hi, 15, 1e-12);
  return std::clamp(value, 0.0, 1.0);
}

double studentized_range_sf(double q, int k, double df) {
  return 1.0 - studentized_range_cdf(q, k, df);
}

double studentized_range_quantile(double p, int k, double df) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("studentized range quantile: p must be in (0, 1)");
  double hi = 1.0;
  while (studentized_range_cdf(hi, k, df) < p) {
    hi *= 2.0;
    if (hi > 1e6) throw Error("studentized range quantile: failed to bracket");
  }
  double lo = hi / 2.0;
  while (lo > 1e-8 && studentized_range_cdf(lo, k, df) > p) lo /= 2.0;
  auto f = [&](double q) { return studentized_range_cdf(q, k, df) - p; };
  std::uintmax_t iterations = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(45),
                                                  iterations);
  return 0.5 * (a + b);
}

}  // namespace amimort::dist
