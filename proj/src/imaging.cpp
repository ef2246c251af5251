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

#include "fuzzystego/imaging.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "fuzzystego/error.hpp"

namespace fuzzystego {

Image::Image(int height, int width, int channels)
    : Image(height, width, channels,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(height, 0)) *
                                      static_cast<std::size_t>(std::max(width, 0)) *
                                      static_cast<std::size_t>(std::max(channels, 0)))) {}

Image::Image(int height, int width, int channels, std::vector<std::uint8_t> samples)
    : height_(height), width_(width), channels_(channels), samples_(std::move(samples)) {
  if (height <= 0 || width <= 0) {
    throw Error(ErrorCode::invalid_argument, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::invalid_argument, "channels must be 1 or 3");
  }
  if (samples_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
                             static_cast<std::size_t>(channels)) {
    throw Error(ErrorCode::invalid_argument, "sample count does not match dimensions");
  }
}

PixelCoord Image::coord(std::size_t sample_index) const noexcept {
  const auto ch = static_cast<std::size_t>(channels_);
  const std::size_t pixel = sample_index / ch;
  return {static_cast<int>(pixel / static_cast<std::size_t>(width_)),
          static_cast<int>(pixel % static_cast<std::size_t>(width_)),
          static_cast<int>(sample_index % ch)};
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadState() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

void png_error_handler(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

Image load_png(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::file_not_found, path.string());
  }
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::file_not_found, path.string());

  png_byte signature[8] = {};
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorCode::unsupported_format, "not a PNG file: " + path.string());
  }

  ReadState st;
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                  png_warning_handler);
  if (!st.png) throw Error(ErrorCode::io_error, "png_create_read_struct failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw Error(ErrorCode::io_error, "png_create_info_struct failed");

  // Allocated before setjmp so a longjmp never skips a destructor.
  std::vector<std::uint8_t> samples;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  bool has_alpha = false;

  if (setjmp(png_jmpbuf(st.png))) {
    throw Error(ErrorCode::unsupported_format, "corrupt or truncated PNG: " + path.string());
  }

  png_init_io(st.png, file.get());
  png_set_sig_bytes(st.png, 8);
  png_read_info(st.png, st.info);

  width = png_get_image_width(st.png, st.info);
  height = png_get_image_height(st.png, st.info);
  const int color_type = png_get_color_type(st.png, st.info);
  const int bit_depth = png_get_bit_depth(st.png, st.info);

  has_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0 ||
              png_get_valid(st.png, st.info, PNG_INFO_tRNS) != 0;
  if (!has_alpha) {
    bool to_rgb = false;
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
      png_set_palette_to_rgb(st.png);
      to_rgb = true;
    }
    if (bit_depth == 16) {
      png_set_strip_16(st.png);
      to_rgb = true;
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(st.png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && to_rgb) {
      png_set_gray_to_rgb(st.png);
    }
    png_set_interlace_handling(st.png);
    png_read_update_info(st.png, st.info);

    channels = png_get_channels(st.png, st.info);
    if (png_get_bit_depth(st.png, st.info) == 8 && (channels == 1 || channels == 3)) {
      const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
      samples.resize(stride * height);
      rows.resize(height);
      for (png_uint_32 r = 0; r < height; ++r) rows[r] = samples.data() + r * stride;
      png_read_image(st.png, rows.data());
      png_read_end(st.png, nullptr);
    }
  }

  if (has_alpha) {
    throw Error(ErrorCode::unsupported_format, "alpha channels are not supported: " + path.string());
  }
  if (samples.empty()) {
    throw Error(ErrorCode::unsupported_format, "unsupported PNG layout: " + path.string());
  }
  return Image(static_cast<int>(height), static_cast<int>(width), channels, std::move(samples));
}

void save_png(const Image& img, const std::filesystem::path& path) {
  if (img.empty()) throw Error(ErrorCode::invalid_argument, "cannot save an empty image");
  png_image out{};
  out.version = PNG_IMAGE_VERSION;
  out.width = static_cast<png_uint_32>(img.width());
  out.height = static_cast<png_uint_32>(img.height());
  out.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int ok = png_image_write_to_file(&out, path.c_str(), 0, img.samples().data(),
                                         img.width() * img.channels(), nullptr);
  if (!ok) {
    std::string reason = out.message;
    png_image_free(&out);
    throw Error(ErrorCode::io_error, "cannot write " + path.string() + ": " + reason);
  }
}

double mse(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::dimension_mismatch, "mse operands differ in shape");
  const auto sa = a.samples();
  const auto sb = b.samples();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const int d = static_cast<int>(sa[i]) - static_cast<int>(sb[i]);
    acc += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(acc) / static_cast<double>(sa.size());
}

void save_heatmap_png(const Plane<double>& map, const std::filesystem::path& path) {
  const auto values = map.values();
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "empty map");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = *hi - *lo;
  std::vector<std::uint8_t> px(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = span > 0 ? (values[i] - *lo) / span : 0.0;
    px[i] = static_cast<std::uint8_t>(std::clamp(t * 255.0 + 0.5, 0.0, 255.0));
  }
  save_png(Image(map.rows(), map.cols(), 1, std::move(px)), path);
}

}  // namespace fuzzystego
