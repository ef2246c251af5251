// Copyright 2026 The fuzzystego Authors.
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

#include <cstddef>
#include <functional>
#include <span>

namespace fuzzystego {

/// Adaptive Simpson quadrature. The interval is first split into `panels`
/// pieces; each piece is refined until its Richardson error estimate falls
/// under rel_tol times the coarse total.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-9,
                 int panels = 32);

/// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
/// via the power series for x < a+1 and Lentz's continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

double normal_cdf(double x) noexcept;

double students_t_pdf(double x, double df) noexcept;
/// P(T > t), integrated directly so far tails keep relative accuracy.
double students_t_sf(double t, double df);
double students_t_cdf(double t, double df);
/// t with P(T <= t) = p, by bisection on the tail.
double students_t_quantile(double p, double df);

/// Noncentral t with `df` degrees of freedom and noncentrality `ncp`,
/// integrated over the chi scale variable s = sqrt(V/df).
double noncentral_t_cdf(double t, double df, double ncp);
double noncentral_t_sf(double t, double df, double ncp);

/// Power of the two-sided one-sample t test at level `alpha`:
/// P(|T'| > t_{1-alpha/2}) with T' ~ nct(df, ncp).
double two_sided_t_power(double df, double ncp, double alpha);

double bonferroni(double p, int k);

struct Summary {
  std::size_t n = 0;
  double mean = 0;
  double sd = 0;  // sample standard deviation (n-1)
  double ci_low = 0;
  double ci_high = 0;
};

/// Mean, sd and the 95% t interval mean ± t(0.975, n-1)·sd/√n. With n < 2
/// the interval collapses onto the mean.
Summary summarize(std::span<const double> values);

struct PairedTestReport {
  std::size_t n = 0;
  double mean_diff = 0;
  double sd_diff = 0;
  double t_stat = 0;
  double df = 0;
  double p_value = 0;
  double p_bonferroni = 0;
  double cohens_d = 0;
  double ci_low = 0;
  double ci_high = 0;
  double power = 0;
};

/// Paired t test on precomputed differences. Power uses ncp = d·√n at
/// alpha / k. Throws InsufficientSamples (n < 2) or DegenerateVariance (sd = 0).
PairedTestReport paired_t_test(std::span<const double> diffs, int comparisons_k = 1, double alpha = 0.05);

}  // namespace fuzzystego
