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

// Reference values for the paired t machinery from Boost.Math; shared by
// the unit tests and the acceptance binary.

#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fuzzystego/corpus.hpp"

namespace testing {

struct PairedOracle {
  double mean = 0, sd = 0, t = 0, p = 0, d = 0, ci_low = 0, ci_high = 0, power = 0;
};

inline double boost_power(double df, double ncp, double alpha) {
  const boost::math::students_t central(df);
  const double crit = boost::math::quantile(central, 1.0 - alpha / 2.0);
  const boost::math::non_central_t shifted(df, ncp);
  return boost::math::cdf(boost::math::complement(shifted, crit)) + boost::math::cdf(shifted, -crit);
}

inline PairedOracle paired_oracle(const std::vector<double>& v, int k = 1, double alpha = 0.05) {
  PairedOracle o;
  const double n = static_cast<double>(v.size());
  for (double x : v) o.mean += x;
  o.mean /= n;
  double ss = 0;
  for (double x : v) ss += (x - o.mean) * (x - o.mean);
  o.sd = std::sqrt(ss / (n - 1));
  o.t = o.mean / (o.sd / std::sqrt(n));
  o.d = o.mean / o.sd;
  const boost::math::students_t dist(n - 1);
  o.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(o.t)));
  const double half = boost::math::quantile(dist, 0.975) * o.sd / std::sqrt(n);
  o.ci_low = o.mean - half;
  o.ci_high = o.mean + half;
  o.power = boost_power(n - 1, o.d * std::sqrt(n), alpha / k);
  return o;
}

/// Twenty fixed difference vectors of varied size, location and spread.
inline std::vector<std::vector<double>> fixed_vectors() {
  std::vector<std::vector<double>> out = {{1.0, 2.0, 3.0}};
  fuzzystego::Prng rng(2024);
  const int sizes[] = {3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 40, 50, 60, 80, 100, 5, 9, 30};
  const double shifts[] = {0.5, -1.2, 0.1, 2.0, -0.3, 0.8, 0.05, -0.6, 0.4, 1.5, -0.02, 0.25, -0.9, 0.15, 0.6, -0.2, 3.0, -2.5, 0.0};
  for (int i = 0; i < 19; ++i) {
    std::vector<double> v;
    for (int j = 0; j < sizes[i]; ++j) v.push_back(shifts[i] + rng.uniform(-1.0, 1.0) * (1.0 + 0.1 * i));
    out.push_back(v);
  }
  return out;
}

}  // namespace testing
