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

#include "fuzzystego/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "fuzzystego/error.hpp"

namespace fuzzystego {

int mirror_index(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i = std::abs(i) % period;
  return i >= n ? period - i : i;
}

Image strip_lower_bits(const Image& img) {
  Image out = img;
  for (auto& s : out.samples()) s = static_cast<std::uint8_t>(s & kStripMask);
  return out;
}

Plane<double> to_gray(const Image& stripped) {
  Plane<double> g(stripped.height(), stripped.width());
  for (int x = 0; x < stripped.height(); ++x) {
    for (int y = 0; y < stripped.width(); ++y) {
      if (stripped.channels() == 1) {
        g(x, y) = stripped.at(x, y, 0);
      } else {
        g(x, y) = 0.299 * stripped.at(x, y, 0) + 0.587 * stripped.at(x, y, 1) +
                  0.114 * stripped.at(x, y, 2);
      }
    }
  }
  return g;
}

Plane<double> local_entropy(const Plane<double>& gray, const EntropyConfig& cfg) {
  if (cfg.bins != 64) throw Error(ErrorCode::invalid_argument, "entropy uses exactly 64 bins");
  if (cfg.window_radius < 1) throw Error(ErrorCode::invalid_argument, "window radius must be >= 1");

  const int rows = gray.rows();
  const int cols = gray.cols();
  const int r = cfg.window_radius;
  const int window = (2 * r + 1) * (2 * r + 1);

  Plane<std::uint8_t> bin(rows, cols);
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) {
      bin(x, y) = static_cast<std::uint8_t>(std::clamp(static_cast<int>(std::floor(gray(x, y) / 4.0)), 0, 63));
    }
  }

  // -(c/N) log2(c/N) for every possible count, so each pixel's sum is a
  // fixed-order accumulation of table entries.
  std::vector<double> term(static_cast<std::size_t>(window) + 1, 0.0);
  for (int c = 1; c <= window; ++c) {
    const double p = static_cast<double>(c) / window;
    term[static_cast<std::size_t>(c)] = -p * std::log2(p);
  }

  Plane<double> out(rows, cols);
  std::array<int, 64> hist{};
  for (int x = 0; x < rows; ++x) {
    hist.fill(0);
    for (int dx = -r; dx <= r; ++dx) {
      const int xx = mirror_index(x + dx, rows);
      for (int dy = -r; dy <= r; ++dy) ++hist[bin(xx, mirror_index(dy, cols))];
    }
    for (int y = 0; y < cols; ++y) {
      if (y > 0) {
        const int leaving = mirror_index(y - 1 - r, cols);
        const int entering = mirror_index(y + r, cols);
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = mirror_index(x + dx, rows);
          --hist[bin(xx, leaving)];
          ++hist[bin(xx, entering)];
        }
      }
      double h = 0.0;
      for (int b = 0; b < 64; ++b) h += term[static_cast<std::size_t>(hist[b])];
      out(x, y) = h;
    }
  }
  return out;
}

Plane<double> edge_magnitude(const Plane<double>& gray) {
  const int rows = gray.rows();
  const int cols = gray.cols();
  if (rows < 3 || cols < 3) throw Error(ErrorCode::image_too_small, "Sobel needs at least 3×3 pixels");

  Plane<double> mag(rows, cols);
  double peak = 0.0;
  for (int x = 0; x < rows; ++x) {
    const int xm = mirror_index(x - 1, rows);
    const int xp = mirror_index(x + 1, rows);
    for (int y = 0; y < cols; ++y) {
      const int ym = mirror_index(y - 1, cols);
      const int yp = mirror_index(y + 1, cols);
      // Sx responds to change along columns (y), Sy along rows (x).
      const double gx = (gray(xm, yp) + 2.0 * gray(x, yp) + gray(xp, yp)) -
                        (gray(xm, ym) + 2.0 * gray(x, ym) + gray(xp, ym));
      const double gy = (gray(xp, ym) + 2.0 * gray(xp, y) + gray(xp, yp)) -
                        (gray(xm, ym) + 2.0 * gray(xm, y) + gray(xm, yp));
      const double m = std::sqrt(gx * gx + gy * gy);
      mag(x, y) = m;
      peak = std::max(peak, m);
    }
  }
  if (peak > 0.0) {
    for (double& v : mag.values()) v /= peak;
  }
  return mag;
}

FeatureMaps extract_features(const Image& img, const EntropyConfig& cfg) {
  FeatureMaps fm;
  fm.gray = to_gray(strip_lower_bits(img));
  fm.edge = edge_magnitude(fm.gray);
  fm.entropy = local_entropy(fm.gray, cfg);
  return fm;
}

}  // namespace fuzzystego
