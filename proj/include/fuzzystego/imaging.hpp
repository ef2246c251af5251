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
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fuzzystego {

/// Location of one 8-bit sample: row `x`, column `y`, channel `c`.
struct PixelCoord {
  int x = 0;
  int y = 0;
  int c = 0;
};

/// An 8-bit raster, row-major with interleaved channels. This linearization
/// is the canonical sample order for capacity and permutation indexing.
class Image {
 public:
  Image() = default;
  /// Zero-filled image. Throws InvalidArgument unless height, width > 0 and
  /// channels is 1 or 3.
  Image(int height, int width, int channels);
  Image(int height, int width, int channels, std::vector<std::uint8_t> samples);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(y)) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }
  std::size_t index(PixelCoord p) const noexcept { return index(p.x, p.y, p.c); }
  PixelCoord coord(std::size_t sample_index) const noexcept;

  std::uint8_t at(int x, int y, int c) const noexcept { return samples_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) noexcept { return samples_[index(x, y, c)]; }

  std::span<const std::uint8_t> samples() const& noexcept { return samples_; }
  std::span<std::uint8_t> samples() & noexcept { return samples_; }
  void samples() && = delete;  // span would dangle

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  bool operator==(const Image&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Dense H×W matrix used for feature, depth and capacity maps.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(int x, int y) noexcept {
    return data_[static_cast<std::size_t>(x) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(y)];
  }
  const T& operator()(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(x) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(y)];
  }

  std::span<T> values() & noexcept { return data_; }
  std::span<const T> values() const& noexcept { return data_; }
  void values() && = delete;  // span would dangle

  bool operator==(const Plane&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

/// Reads an 8-bit grayscale or RGB PNG. Paletted and 16-bit files are
/// converted to 8-bit RGB; any alpha (including palette transparency) is
/// rejected with UnsupportedFormat.
Image load_png(const std::filesystem::path& path);

/// Writes a non-interlaced 8-bit PNG. Throws IoError on failure.
void save_png(const Image& img, const std::filesystem::path& path);

/// Mean of squared sample differences. Throws DimensionMismatch.
double mse(const Image& a, const Image& b);

/// Writes a real-valued map as a linearly scaled 8-bit grayscale PNG (debug aid).
void save_heatmap_png(const Plane<double>& map, const std::filesystem::path& path);

}  // namespace fuzzystego
