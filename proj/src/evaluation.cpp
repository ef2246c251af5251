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

#include "fuzzystego/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fuzzystego/error.hpp"

namespace fuzzystego {

namespace {

void require_same_shape(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::dimension_mismatch, "images differ in shape");
}

double psnr_from_mse(double m) {
  if (m == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

// Summed-area table with a zero top row and left column.
std::vector<double> integral(const Image& img, int c, int power_a, const Image* other) {
  const auto h = static_cast<std::size_t>(img.height());
  const auto w = static_cast<std::size_t>(img.width());
  std::vector<double> s((h + 1) * (w + 1), 0.0);
  for (std::size_t x = 0; x < h; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < w; ++y) {
      const double a = img.at(static_cast<int>(x), static_cast<int>(y), c);
      double v = power_a == 2 ? a * a : a;
      if (other != nullptr) v = a * other->at(static_cast<int>(x), static_cast<int>(y), c);
      row += v;
      s[(x + 1) * (w + 1) + y + 1] = s[x * (w + 1) + y + 1] + row;
    }
  }
  return s;
}

double window_sum(const std::vector<double>& s, std::size_t w1, std::size_t x, std::size_t y, std::size_t k) {
  return s[(x + k) * w1 + y + k] - s[x * w1 + y + k] - s[(x + k) * w1 + y] + s[x * w1 + y];
}

double channel_ssim(const Image& a, const Image& b, int c) {
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  constexpr auto k = static_cast<std::size_t>(kSsimWindow);
  constexpr double n = kSsimWindow * kSsimWindow;
  const auto sa = integral(a, c, 1, nullptr);
  const auto sb = integral(b, c, 1, nullptr);
  const auto saa = integral(a, c, 2, nullptr);
  const auto sbb = integral(b, c, 2, nullptr);
  const auto sab = integral(a, c, 1, &b);
  const auto w1 = static_cast<std::size_t>(a.width()) + 1;
  const std::size_t rows = static_cast<std::size_t>(a.height()) - k + 1;
  const std::size_t cols = static_cast<std::size_t>(a.width()) - k + 1;
  double total = 0.0;
  for (std::size_t x = 0; x < rows; ++x) {
    for (std::size_t y = 0; y < cols; ++y) {
      const double ma = window_sum(sa, w1, x, y, k) / n;
      const double mb = window_sum(sb, w1, x, y, k) / n;
      const double va = (window_sum(saa, w1, x, y, k) - n * ma * ma) / (n - 1);
      const double vb = (window_sum(sbb, w1, x, y, k) - n * mb * mb) / (n - 1);
      const double cov = (window_sum(sab, w1, x, y, k) - n * ma * mb) / (n - 1);
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
  }
  return total / static_cast<double>(rows * cols);
}

std::array<double, 256> channel_histogram(const Image& img, int c) {
  std::array<double, 256> h{};
  const auto s = img.samples();
  const auto step = static_cast<std::size_t>(img.channels());
  for (std::size_t i = static_cast<std::size_t>(c); i < s.size(); i += step) h[s[i]] += 1.0;
  return h;
}

}  // namespace

double psnr(const Image& cover, const Image& stego) { return psnr_from_mse(mse(cover, stego)); }

double ssim(const Image& cover, const Image& stego) {
  require_same_shape(cover, stego);
  if (cover.height() < kSsimWindow || cover.width() < kSsimWindow) {
    throw Error(ErrorCode::image_too_small, "SSIM needs at least a 7x7 image");
  }
  if (cover == stego) return 1.0;
  double sum = 0.0;
  for (int c = 0; c < cover.channels(); ++c) sum += channel_ssim(cover, stego, c);
  return sum / cover.channels();
}

double kl_divergence_counts(std::span<const double> p_counts, std::span<const double> q_counts, double epsilon) {
  if (p_counts.size() != q_counts.size() || p_counts.empty()) {
    throw Error(ErrorCode::dimension_mismatch, "histograms differ in length");
  }
  double np = 0.0, nq = 0.0;
  for (double v : p_counts) np += v;
  for (double v : q_counts) nq += v;
  const double bins = static_cast<double>(p_counts.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p_counts.size(); ++i) {
    const double p = (p_counts[i] / np + epsilon) / (1.0 + bins * epsilon);
    const double q = (q_counts[i] / nq + epsilon) / (1.0 + bins * epsilon);
    d += p * std::log2(p / q);
  }
  return std::max(0.0, d);
}

double kl_divergence(const Image& cover, const Image& stego, double epsilon) {
  if (cover.channels() != stego.channels()) throw Error(ErrorCode::dimension_mismatch, "channel counts differ");
  double sum = 0.0;
  for (int c = 0; c < cover.channels(); ++c) {
    const auto p = channel_histogram(cover, c);
    const auto q = channel_histogram(stego, c);
    sum += kl_divergence_counts(p, q, epsilon);
  }
  return sum / cover.channels();
}

QualityRecord quality(const Image& cover, const Image& stego) {
  QualityRecord q;
  q.mse = mse(cover, stego);
  q.psnr = psnr_from_mse(q.mse);
  q.ssim = ssim(cover, stego);
  q.kl = kl_divergence(cover, stego);
  return q;
}

}  // namespace fuzzystego
