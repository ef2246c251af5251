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

#include "fuzzystego/steganalysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fuzzystego/parallel.hpp"
#include "fuzzystego/statistics.hpp"

namespace fuzzystego {

Plane<int> analysis_plane(const Image& img) {
  if (img.empty()) throw Error(ErrorCode::invalid_argument, "empty image");
  const int c = img.channels() == 3 ? 1 : 0;
  Plane<int> plane(img.height(), img.width());
  for (int x = 0; x < img.height(); ++x) {
    for (int y = 0; y < img.width(); ++y) plane(x, y) = img.at(x, y, c);
  }
  return plane;
}

namespace {

constexpr int kGroup = 4;
constexpr std::array<int, kGroup> kMask = {0, 1, 1, 0};

int flip_pos(int v) noexcept { return v ^ 1; }
int flip_neg(int v) noexcept { return ((v + 1) ^ 1) - 1; }

template <typename Flip>
int smoothness_after(const std::array<int, kGroup>& g, Flip flip) noexcept {
  std::array<int, kGroup> h = g;
  for (int i = 0; i < kGroup; ++i) {
    if (kMask[static_cast<std::size_t>(i)] != 0) h[static_cast<std::size_t>(i)] = flip(h[static_cast<std::size_t>(i)]);
  }
  int f = 0;
  for (std::size_t i = 0; i + 1 < kGroup; ++i) f += std::abs(h[i + 1] - h[i]);
  return f;
}

struct RsTally {
  RsCounts counts;
  std::size_t groups = 0;
  std::size_t flat = 0;
};

RsTally rs_tally(const Plane<int>& plane) {
  RsTally t;
  std::size_t rm = 0, sm = 0, rn = 0, sn = 0;
  for (int x = 0; x < plane.rows(); ++x) {
    for (int y = 0; y + kGroup <= plane.cols(); y += kGroup) {
      std::array<int, kGroup> g{};
      for (int i = 0; i < kGroup; ++i) g[static_cast<std::size_t>(i)] = plane(x, y + i);
      int f = 0;
      for (std::size_t i = 0; i + 1 < kGroup; ++i) f += std::abs(g[i + 1] - g[i]);
      const int fp = smoothness_after(g, flip_pos);
      const int fn = smoothness_after(g, flip_neg);
      ++t.groups;
      if (f == 0) ++t.flat;
      rm += fp > f;
      sm += fp < f;
      rn += fn > f;
      sn += fn < f;
    }
  }
  if (t.groups > 0) {
    const double n = static_cast<double>(t.groups);
    t.counts = {static_cast<double>(rm) / n, static_cast<double>(sm) / n, static_cast<double>(rn) / n,
                static_cast<double>(sn) / n};
  }
  return t;
}

DetectionResult rate_result(double rate, double threshold) {
  DetectionResult r;
  r.statistic = std::clamp(rate, 0.0, 1.0);
  r.threshold = threshold;
  r.detected = r.statistic > threshold;
  return r;
}

DetectionResult fallback(double threshold, ErrorCode why) {
  DetectionResult r;
  r.threshold = threshold;
  r.condition = why;
  return r;
}

// Negative discriminants no larger than this fraction of b² are read as a
// double root blurred by sampling noise (full embedding sits on one).
constexpr double kDoubleRootTolerance = 0.1;

enum class ComplexRoots { fail, double_root_within_tolerance, real_part };

// Smaller real root of a·x² + b·x + c, by value or by magnitude.
std::optional<double> smaller_root(double a, double b, double c, bool by_magnitude, ComplexRoots complex) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0) return std::nullopt;
  if (std::abs(a) <= 1e-12 * scale) {
    if (b == 0) return std::nullopt;
    return -c / b;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0) {
    const bool near_double = -disc <= kDoubleRootTolerance * b * b;
    if (complex == ComplexRoots::fail || (complex == ComplexRoots::double_root_within_tolerance && !near_double)) {
      return std::nullopt;
    }
    disc = 0;
  }
  const double sq = std::sqrt(disc);
  // Stable pairing of roots.
  const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
  if (q == 0) return 0.0;
  const double r1 = q / a;
  const double r2 = c / q;
  if (by_magnitude) return std::abs(r1) <= std::abs(r2) ? r1 : r2;
  return std::min(r1, r2);
}

}  // namespace

RsCounts rs_counts(const Plane<int>& plane) { return rs_tally(plane).counts; }

DetectionResult rs_analysis(const Image& img, double threshold) {
  Plane<int> plane = analysis_plane(img);
  const RsTally at = rs_tally(plane);
  if (at.groups == 0 || at.flat == at.groups) return fallback(threshold, ErrorCode::degenerate_image);
  for (int& v : plane.values()) v ^= 1;
  const RsCounts fl = rs_tally(plane).counts;
  const RsCounts& c = at.counts;
  const double d0 = c.r_m - c.s_m;
  const double d1 = fl.r_m - fl.s_m;
  const double dn0 = c.r_neg - c.s_neg;
  const double dn1 = fl.r_neg - fl.s_neg;
  const auto x = smaller_root(2.0 * (d1 + d0), dn0 - dn1 - d1 - 3.0 * d0, d0 - dn0, true, ComplexRoots::real_part);
  if (!x || *x == 0.5) return fallback(threshold, ErrorCode::numerical_failure);
  return rate_result(*x / (*x - 0.5), threshold);
}

DetectionResult chi_square_histogram(std::span<const std::uint64_t, 256> histogram, double threshold) {
  double chi = 0.0;
  int used = 0;
  for (std::size_t k = 0; k < 128; ++k) {
    const double even = static_cast<double>(histogram[2 * k]);
    const double odd = static_cast<double>(histogram[2 * k + 1]);
    if (even + odd <= 4) continue;
    const double expected = 0.5 * (even + odd);
    chi += (even - expected) * (even - expected) / expected;
    ++used;
  }
  if (used < 2) throw Error(ErrorCode::insufficient_data, "chi-square attack needs at least 2 usable pairs");
  DetectionResult r;
  r.statistic = chi_square_sf(chi, used - 1);
  r.threshold = threshold;
  r.detected = r.statistic >= threshold;
  return r;
}

DetectionResult chi_square_attack(const Image& img, double threshold) {
  std::array<std::uint64_t, 256> hist{};
  for (std::uint8_t v : img.samples()) ++hist[v];
  return chi_square_histogram(hist, threshold);
}

SpaCounts spa_counts(const Plane<int>& plane) {
  SpaCounts s;
  for (int x = 0; x < plane.rows(); ++x) {
    for (int y = 0; y + 1 < plane.cols(); ++y) {
      const int u = plane(x, y);
      const int v = plane(x, y + 1);
      ++s.pairs;
      const bool even = (v & 1) == 0;
      if ((even && u < v) || (!even && u > v)) ++s.x;
      if ((even && u > v) || (!even && u < v)) ++s.y;
      if (u / 2 == v / 2) ++s.same_pair;
    }
  }
  return s;
}

DetectionResult sample_pair_analysis(const Image& img, double threshold) {
  if (img.width() < 2) throw Error(ErrorCode::invalid_argument, "sample pair analysis needs width >= 2");
  const SpaCounts s = spa_counts(analysis_plane(img));
  if (s.pairs == 0 || s.same_pair == 0) return fallback(threshold, ErrorCode::degenerate_image);
  const double p = static_cast<double>(s.pairs);
  const double x = static_cast<double>(s.x);
  const double y = static_cast<double>(s.y);
  const double g = static_cast<double>(s.same_pair);
  const auto root = smaller_root(0.5 * g, 2.0 * x - p, y - x, false, ComplexRoots::double_root_within_tolerance);
  if (!root) return fallback(threshold, ErrorCode::numerical_failure);
  return rate_result(*root, threshold);
}

DetectorFeatures detector_features(const Image& img) {
  DetectorFeatures f{};
  f[0] = rs_analysis(img).statistic;
  f[1] = img.width() >= 2 ? sample_pair_analysis(img).statistic : 0.0;
  try {
    f[2] = chi_square_attack(img).statistic;
  } catch (const Error&) {
    f[2] = 0.0;
  }
  const auto samples = img.samples();
  std::size_t ones = 0;
  for (std::uint8_t v : samples) ones += v & 1U;
  f[3] = std::abs(static_cast<double>(ones) / static_cast<double>(samples.size()) - 0.5);

  // Pearson correlation of horizontally adjacent LSBs within each channel.
  double n = 0, sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int x = 0; x < img.height(); ++x) {
    for (int y = 0; y + 1 < img.width(); ++y) {
      for (int c = 0; c < img.channels(); ++c) {
        const double a = img.at(x, y, c) & 1;
        const double b = img.at(x, y + 1, c) & 1;
        n += 1;
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
      }
    }
  }
  if (n > 0) {
    const double cov = sab / n - (sa / n) * (sb / n);
    const double va = saa / n - (sa / n) * (sa / n);
    const double vb = sbb / n - (sb / n) * (sb / n);
    f[4] = va > 0 && vb > 0 ? cov / std::sqrt(va * vb) : 0.0;
  }
  return f;
}

double FeatureDetectorModel::score(const DetectorFeatures& f) const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += weights[j] * (f[j] - mean[j]) / scale[j];
  return s;
}

FeatureDetectorModel train_feature_detector(std::span<const DetectorFeatures> covers,
                                            std::span<const DetectorFeatures> stegos) {
  if (covers.empty() || stegos.empty()) throw Error(ErrorCode::empty_training_set, "both classes need samples");
  constexpr std::size_t kDims = std::tuple_size_v<DetectorFeatures>;
  FeatureDetectorModel m;
  const double nc = static_cast<double>(covers.size());
  const double ns = static_cast<double>(stegos.size());
  for (std::size_t j = 0; j < kDims; ++j) {
    double sum = 0.0;
    for (const auto& f : covers) sum += f[j];
    for (const auto& f : stegos) sum += f[j];
    m.mean[j] = sum / (nc + ns);
    double ss = 0.0;
    for (const auto& f : covers) ss += (f[j] - m.mean[j]) * (f[j] - m.mean[j]);
    for (const auto& f : stegos) ss += (f[j] - m.mean[j]) * (f[j] - m.mean[j]);
    const double sd = std::sqrt(ss / (nc + ns));
    m.scale[j] = sd > 0 ? sd : 1.0;
  }
  for (std::size_t j = 0; j < kDims; ++j) {
    double mc = 0.0, ms = 0.0;
    for (const auto& f : covers) mc += (f[j] - m.mean[j]) / m.scale[j];
    for (const auto& f : stegos) ms += (f[j] - m.mean[j]) / m.scale[j];
    mc /= nc;
    ms /= ns;
    double ss = 0.0;
    for (const auto& f : covers) ss += std::pow((f[j] - m.mean[j]) / m.scale[j] - mc, 2);
    for (const auto& f : stegos) ss += std::pow((f[j] - m.mean[j]) / m.scale[j] - ms, 2);
    const double pooled = ss / (nc + ns);
    m.weights[j] = (ms - mc) / (pooled + 1e-6);
  }

  std::vector<double> cs, ss;
  for (const auto& f : covers) cs.push_back(m.score(f));
  for (const auto& f : stegos) ss.push_back(m.score(f));
  std::vector<double> all = cs;
  all.insert(all.end(), ss.begin(), ss.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<double> candidates{all.front() - 1.0};
  for (std::size_t i = 0; i + 1 < all.size(); ++i) candidates.push_back(0.5 * (all[i] + all[i + 1]));

  const auto balanced = [&](double thr) {
    const auto tn = std::count_if(cs.begin(), cs.end(), [thr](double s) { return !(s > thr); });
    const auto tp = std::count_if(ss.begin(), ss.end(), [thr](double s) { return s > thr; });
    return 0.5 * (static_cast<double>(tn) / nc + static_cast<double>(tp) / ns);
  };
  double best = -1.0;
  for (double thr : candidates) {
    const double acc = balanced(thr);
    if (acc > best) {
      best = acc;
      m.threshold = thr;
    }
  }
  m.training_balanced_accuracy = best;
  m.trained = true;
  return m;
}

FeatureDetectorModel train_feature_detector(std::span<const Image> covers, std::span<const Image> stegos) {
  if (covers.empty() || stegos.empty()) throw Error(ErrorCode::empty_training_set, "both classes need samples");
  std::vector<DetectorFeatures> fc(covers.size()), fs(stegos.size());
  parallel_for(covers.size(), 0, [&](std::size_t i) { fc[i] = detector_features(covers[i]); });
  parallel_for(stegos.size(), 0, [&](std::size_t i) { fs[i] = detector_features(stegos[i]); });
  return train_feature_detector(fc, fs);
}

DetectionResult feature_detector(const DetectorFeatures& features, const FeatureDetectorModel& model) {
  if (!model.trained) throw Error(ErrorCode::model_not_trained, "feature detector model is not trained");
  DetectionResult r;
  r.statistic = model.score(features);
  r.threshold = model.threshold;
  r.detected = r.statistic > r.threshold;
  return r;
}

DetectionResult feature_detector(const Image& img, const FeatureDetectorModel& model) {
  return feature_detector(detector_features(img), model);
}

}  // namespace fuzzystego
