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

namespace amimort::dist {

// Lower-tail CDFs. Degrees of freedom must be positive; `df = inf` is
// accepted where the limit exists.
double student_t_cdf(double t, double df);
double fisher_f_cdf(double x, double df1, double df2);
double chi_squared_cdf(double x, double df);

// Upper tails computed directly (no 1 - cdf cancellation).
double student_t_two_sided_p(double t, double df);
double fisher_f_sf(double x, double df1, double df2);
double chi_squared_sf(double x, double df);

// Studentized range distribution: P(Q <= q) for the range of k independent
// standard normals divided by an independent sqrt(chi^2_df / df). Evaluated
// by adaptive Gauss-Kronrod quadrature of the classical double integral;
// absolute accuracy is better than 1e-8 over k in [2, 100], df >= 1.
double studentized_range_cdf(double q, int k, double df);
double studentized_range_sf(double q, int k, double df);

// Smallest q with P(Q <= q) >= p, found by bracketed root finding.
double studentized_range_quantile(double p, int k, double df);

}  // namespace amimort::dist
