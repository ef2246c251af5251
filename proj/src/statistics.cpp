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

#include "fuzzystego/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fuzzystego/error.hpp"

namespace fuzzystego {

namespace {

constexpr int kMaxSimpsonDepth = 40;

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, int panels) {
  if (a == b) return 0.0;
  panels = std::max(panels, 1);
  const double h = (b - a) / panels;
  std::vector<double> fa(static_cast<std::size_t>(panels)), fm(fa.size()), fb(fa.size()), coarse(fa.size());
  double total = 0.0;
  double prev = f(a);
  for (int i = 0; i < panels; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double lo = a + h * i;
    const double hi = i + 1 == panels ? b : a + h * (i + 1);
    fa[ui] = prev;
    fm[ui] = f(0.5 * (lo + hi));
    fb[ui] = f(hi);
    prev = fb[ui];
    coarse[ui] = (hi - lo) / 6.0 * (fa[ui] + 4.0 * fm[ui] + fb[ui]);
    total += std::abs(coarse[ui]);
  }
  const double eps = std::max(rel_tol * total, std::numeric_limits<double>::min()) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double lo = a + h * i;
    const double hi = i + 1 == panels ? b : a + h * (i + 1);
    sum += simpson_step(f, lo, hi, fa[ui], fm[ui], fb[ui], coarse[ui], eps, kMaxSimpsonDepth);
  }
  return sum;
}

double regularized_gamma_p(double a, double x) {
  if (a <= 0) throw Error(ErrorCode::invalid_argument, "gamma shape must be positive");
  if (x <= 0) return 0.0;
  if (x >= a + 1.0) return 1.0 - regularized_gamma_q(a, x);
  // Power series.
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 100000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0) throw Error(ErrorCode::invalid_argument, "gamma shape must be positive");
  if (x <= 0) return 1.0;
  if (x < a + 1.0) return 1.0 - regularized_gamma_p(a, x);
  // Continued fraction, modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi_square_sf(double x, double df) { return regularized_gamma_q(0.5 * df, 0.5 * x); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double students_t_pdf(double x, double df) noexcept {
  const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double students_t_sf(double t, double df) {
  if (!(df > 0)) throw Error(ErrorCode::invalid_argument, "degrees of freedom must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (t == 0) return 0.5;
  if (t < 0) return 1.0 - students_t_sf(-t, df);
  if (std::isinf(t)) return 0.0;
  if (t < 1.0) return 0.5 - integrate([df](double x) { return students_t_pdf(x, df); }, 0.0, t);
  // Tail over [t, inf) mapped onto u = t/x in (0, 1]; integrand ~ u^(df-1) at 0.
  const auto tail = [t, df](double u) {
    if (u <= 0) return df == 1.0 ? 1.0 / (std::numbers::pi * t) : 0.0;
    return students_t_pdf(t / u, df) * t / (u * u);
  };
  return integrate(tail, 0.0, 1.0);
}

double students_t_cdf(double t, double df) { return 1.0 - students_t_sf(t, df); }

double students_t_quantile(double p, double df) {
  if (!(p > 0 && p < 1)) throw Error(ErrorCode::invalid_argument, "quantile probability must be in (0,1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -students_t_quantile(1.0 - p, df);
  const double target = 1.0 - p;
  double lo = 0.0;
  double hi = 1.0;
  while (students_t_sf(hi, df) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (students_t_sf(mid, df) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// Log density of s = sqrt(V/df), V ~ chi-square(df).
double chi_scale_log_density(double s, double df) {
  const double constant = std::log(2.0 * df) + (0.5 * df - 1.0) * std::log(df) - 0.5 * df * std::numbers::ln2 -
                          std::lgamma(0.5 * df);
  double power_term = 0.0;
  if (df != 1.0) {
    if (s <= 0) return -std::numeric_limits<double>::infinity();
    power_term = (df - 1.0) * std::log(s);
  }
  return constant + power_term - 0.5 * df * s * s;
}

double chi_scale_expectation(double df, const std::function<double(double)>& g) {
  const double upper = 1.0 + 50.0 / std::sqrt(df);
  return integrate([&](double s) { return g(s) * std::exp(chi_scale_log_density(s, df)); }, 0.0, upper, 1e-10,
                   128);
}

}  // namespace

double noncentral_t_cdf(double t, double df, double ncp) {
  return chi_scale_expectation(df, [=](double s) { return normal_cdf(t * s - ncp); });
}

double noncentral_t_sf(double t, double df, double ncp) {
  return chi_scale_expectation(df, [=](double s) { return normal_cdf(ncp - t * s); });
}

double two_sided_t_power(double df, double ncp, double alpha) {
  const double crit = students_t_quantile(1.0 - 0.5 * alpha, df);
  const double power = chi_scale_expectation(
      df, [=](double s) { return normal_cdf(ncp - crit * s) + normal_cdf(-ncp - crit * s); });
  return std::clamp(power, 0.0, 1.0);
}

double bonferroni(double p, int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "comparison count must be positive");
  return std::min(1.0, static_cast<double>(k) * p);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  s.ci_low = s.ci_high = s.mean;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  if (s.sd > 0 && std::isfinite(s.sd)) {
    const double half = students_t_quantile(0.975, static_cast<double>(s.n - 1)) * s.sd /
                        std::sqrt(static_cast<double>(s.n));
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
  }
  return s;
}

PairedTestReport paired_t_test(std::span<const double> diffs, int comparisons_k, double alpha) {
  if (diffs.size() < 2) throw Error(ErrorCode::insufficient_samples, "paired t test needs at least 2 pairs");
  if (comparisons_k < 1) throw Error(ErrorCode::invalid_argument, "comparison count must be positive");
  PairedTestReport r;
  const Summary s = summarize(diffs);
  if (!(s.sd > 0)) throw Error(ErrorCode::degenerate_variance, "paired differences have zero variance");
  const double n = static_cast<double>(s.n);
  r.n = s.n;
  r.mean_diff = s.mean;
  r.sd_diff = s.sd;
  r.df = n - 1.0;
  r.t_stat = s.mean / (s.sd / std::sqrt(n));
  r.p_value = std::min(1.0, 2.0 * students_t_sf(std::abs(r.t_stat), r.df));
  r.p_bonferroni = bonferroni(r.p_value, comparisons_k);
  r.cohens_d = s.mean / s.sd;
  r.ci_low = s.ci_low;
  r.ci_high = s.ci_high;
  r.power = two_sided_t_power(r.df, r.cohens_d * std::sqrt(n), alpha / comparisons_k);
  return r;
}

}  // namespace fuzzystego
