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

#include "fuzzystego/corpus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fuzzystego/error.hpp"
#include "fuzzystego/parallel.hpp"

namespace fuzzystego {

void Prng::fill(std::span<std::uint8_t> out) noexcept {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = next();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> 56);
      word <<= 8;
    }
  }
}

std::string_view category_name(Category c) noexcept {
  switch (c) {
    case Category::smooth: return "smooth";
    case Category::noise: return "noise";
    case Category::natural_like: return "natural_like";
    case Category::textured: return "textured";
    case Category::mixed: return "mixed";
  }
  return "unknown";
}

Category parse_category(std::string_view name) {
  for (Category c : kCategories) {
    if (category_name(c) == name) return c;
  }
  throw Error(ErrorCode::unknown_category, std::string(name));
}

std::uint64_t image_seed(Category kind, int index, const CorpusSpec& spec) noexcept {
  const auto ordinal = static_cast<std::uint64_t>(kind);
  return spec.master_seed ^ (ordinal * 1000000ull + static_cast<std::uint64_t>(index));
}

namespace {

using Field = std::vector<double>;

int mirror(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i = std::abs(i) % period;
  return i >= n ? period - i : i;
}

// Linear stretch of a real field onto [0, 255].
void renormalize(Field& f) {
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double min = *lo;
  const double span = *hi - *lo;
  for (double& v : f) v = span > 0 ? (v - min) / span * 255.0 : 127.5;
}

void write_channel(const Field& f, Image& img, int c, int row0, int col0, int rows, int cols) {
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) {
      const double v = std::clamp(std::round(f[static_cast<std::size_t>(x) * cols + y]), 0.0, 255.0);
      img.at(row0 + x, col0 + y, c) = static_cast<std::uint8_t>(v);
    }
  }
}

// Separable box blur with mirror padding.
Field box_blur(const Field& in, int rows, int cols, int radius) {
  Field tmp(in.size());
  Field out(in.size());
  const double norm = 1.0 / (2 * radius + 1);
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) {
      double s = 0;
      for (int k = -radius; k <= radius; ++k) s += in[static_cast<std::size_t>(x) * cols + mirror(y + k, cols)];
      tmp[static_cast<std::size_t>(x) * cols + y] = s * norm;
    }
  }
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) {
      double s = 0;
      for (int k = -radius; k <= radius; ++k) s += tmp[static_cast<std::size_t>(mirror(x + k, rows)) * cols + y];
      out[static_cast<std::size_t>(x) * cols + y] = s * norm;
    }
  }
  return out;
}

// Affine gradient plus a heavily blurred white-noise undulation of at most ±8.
Field smooth_field(Prng& rng, int rows, int cols) {
  const double base = rng.uniform(80.0, 176.0);
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double span = rng.uniform(24.0, 96.0);
  Field noise(static_cast<std::size_t>(rows) * cols);
  for (double& v : noise) v = rng.uniform(-1.0, 1.0);
  Field blurred = box_blur(noise, rows, cols, 16);
  double peak = 0;
  for (double v : blurred) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0 ? 8.0 / peak : 0.0;

  Field f(noise.size());
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) {
      const double u = ((x + 0.5) / rows - 0.5) * std::cos(theta) + ((y + 0.5) / cols - 0.5) * std::sin(theta);
      const std::size_t i = static_cast<std::size_t>(x) * cols + y;
      f[i] = base + span * u + scale * blurred[i];
    }
  }
  return f;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// White noise shaped to a 1/f amplitude spectrum, DC removed.
Field pink_field(Prng& rng, int rows, int cols) {
  const int half = cols / 2 + 1;
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  const std::size_t nc = static_cast<std::size_t>(rows) * half;
  auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  auto* spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc));
  fftw_plan forward;
  fftw_plan inverse;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft_r2c_2d(rows, cols, in, spec, FFTW_ESTIMATE);
    inverse = fftw_plan_dft_c2r_2d(rows, cols, spec, in, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in[i] = rng.uniform(-1.0, 1.0);
  fftw_execute(forward);
  for (int x = 0; x < rows; ++x) {
    const double fy = static_cast<double>(std::min(x, rows - x)) / rows;
    for (int y = 0; y < half; ++y) {
      const double fx = static_cast<double>(y) / cols;
      const double f = std::sqrt(fx * fx + fy * fy);
      const double gain = f > 0 ? 1.0 / f : 0.0;
      auto& c = spec[static_cast<std::size_t>(x) * half + y];
      c[0] *= gain;
      c[1] *= gain;
    }
  }
  fftw_execute(inverse);
  Field f(in, in + n);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  fftw_free(in);
  fftw_free(spec);
  return f;
}

// Three oriented sinusoids plus two Gabor patches.
Field texture_field(Prng& rng, int rows, int cols) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  struct Wave {
    double kx, ky, phase, amp, cx, cy, inv_two_sigma2;
  };
  std::vector<Wave> waves;
  for (int i = 0; i < 3; ++i) {
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double freq = rng.uniform(0.02, 0.12);
    waves.push_back({two_pi * freq * std::cos(theta), two_pi * freq * std::sin(theta),
                     rng.uniform(0.0, two_pi), 1.0, 0, 0, 0});
  }
  const double side = std::min(rows, cols);
  for (int i = 0; i < 2; ++i) {
    const double cx = rng.uniform(0.0, rows);
    const double cy = rng.uniform(0.0, cols);
    const double sigma = rng.uniform(0.08, 0.2) * side;
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double freq = rng.uniform(0.04, 0.16);
    waves.push_back({two_pi * freq * std::cos(theta), two_pi * freq * std::sin(theta),
                     rng.uniform(0.0, two_pi), 1.5, cx, cy, 1.0 / (2.0 * sigma * sigma)});
  }
  Field f(static_cast<std::size_t>(rows) * cols);
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) {
      double v = 0;
      for (const Wave& w : waves) {
        double envelope = 1.0;
        if (w.inv_two_sigma2 > 0) {
          const double dx = x - w.cx;
          const double dy = y - w.cy;
          envelope = std::exp(-(dx * dx + dy * dy) * w.inv_two_sigma2);
        }
        v += w.amp * envelope * std::cos(w.kx * x + w.ky * y + w.phase);
      }
      f[static_cast<std::size_t>(x) * cols + y] = v;
    }
  }
  return f;
}

void synthesize(Category kind, Prng& rng, Image& img, int row0, int col0, int rows, int cols) {
  const int channels = img.channels();
  switch (kind) {
    case Category::smooth:
      for (int c = 0; c < channels; ++c) write_channel(smooth_field(rng, rows, cols), img, c, row0, col0, rows, cols);
      return;
    case Category::noise:
      for (int x = 0; x < rows; ++x) {
        for (int y = 0; y < cols; ++y) {
          for (int c = 0; c < channels; ++c) img.at(row0 + x, col0 + y, c) = static_cast<std::uint8_t>(rng.next() >> 56);
        }
      }
      return;
    case Category::natural_like:
      for (int c = 0; c < channels; ++c) {
        Field f = pink_field(rng, rows, cols);
        renormalize(f);
        write_channel(f, img, c, row0, col0, rows, cols);
      }
      return;
    case Category::textured:
      for (int c = 0; c < channels; ++c) {
        Field f = texture_field(rng, rows, cols);
        renormalize(f);
        write_channel(f, img, c, row0, col0, rows, cols);
      }
      return;
    case Category::mixed: {
      const int top = rows / 2;
      const int left = cols / 2;
      const std::array<Category, 4> parts = {Category::smooth, Category::noise,
                                             Category::natural_like, Category::textured};
      const std::array<std::array<int, 4>, 4> boxes = {{{0, 0, top, left},
                                                        {0, left, top, cols - left},
                                                        {top, 0, rows - top, left},
                                                        {top, left, rows - top, cols - left}}};
      for (std::size_t q = 0; q < parts.size(); ++q) {
        Prng sub(rng.next());
        const auto& b = boxes[q];
        if (b[2] > 0 && b[3] > 0) synthesize(parts[q], sub, img, row0 + b[0], col0 + b[1], b[2], b[3]);
      }
      return;
    }
  }
  throw Error(ErrorCode::unknown_category, "invalid category ordinal");
}

}  // namespace

Image generate_category(Category kind, int index, const CorpusSpec& spec) {
  if (static_cast<int>(kind) < 0 || static_cast<int>(kind) > 4) {
    throw Error(ErrorCode::unknown_category, "invalid category ordinal");
  }
  if (spec.side <= 0) throw Error(ErrorCode::invalid_argument, "corpus side must be positive");
  Prng rng(image_seed(kind, index, spec));
  Image img(spec.side, spec.side, 3);
  synthesize(kind, rng, img, 0, 0, spec.side, spec.side);
  return img;
}

Image generate_category(std::string_view kind, int index, const CorpusSpec& spec) {
  return generate_category(parse_category(kind), index, spec);
}

std::vector<ManifestEntry> generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
  if (spec.images_per_category <= 0) {
    throw Error(ErrorCode::invalid_argument, "images_per_category must be positive");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> manifest;
  for (Category c : kCategories) {
    std::filesystem::create_directories(out_dir / category_name(c), ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create category directory: " + ec.message());
    for (int i = 0; i < spec.images_per_category; ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%04d.png", std::string(category_name(c)).c_str(), i);
      manifest.push_back({std::filesystem::path(category_name(c)) / name, c});
    }
  }

  parallel_for(manifest.size(), 0, [&](std::size_t k) {
    const auto per = static_cast<std::size_t>(spec.images_per_category);
    const Image img = generate_category(manifest[k].category, static_cast<int>(k % per), spec);
    save_png(img, out_dir / manifest[k].relative_path);
  });

  std::ofstream out(out_dir / "manifest.csv", std::ios::binary);
  for (const auto& e : manifest) out << e.relative_path.generic_string() << ',' << category_name(e.category) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "cannot write manifest in " + out_dir.string());
  return manifest;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_file) {
  std::ifstream in(manifest_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::file_not_found, manifest_file.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw Error(ErrorCode::unsupported_format, "bad manifest line: " + line);
    entries.push_back({std::filesystem::path(line.substr(0, comma)), parse_category(line.substr(comma + 1))});
  }
  return entries;
}

}  // namespace fuzzystego
