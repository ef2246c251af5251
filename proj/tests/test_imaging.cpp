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

#include <png.h>

#include <cstdio>
#include <fstream>
#include <vector>

#include "support.hpp"

using namespace fuzzystego;

namespace {

// Minimal classic-API writer for layouts save_png never produces.
void write_raw_png(const std::filesystem::path& path, int w, int h, int color_type, int bit_depth,
                   const std::vector<std::uint8_t>& data, const std::vector<png_color>& palette = {},
                   bool trns = false) {
  FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (!palette.empty()) png_set_PLTE(png, info, palette.data(), static_cast<int>(palette.size()));
  png_byte alpha[1] = {0};
  if (trns) png_set_tRNS(png, info, alpha, 1, nullptr);
  png_write_info(png, info);
  const std::size_t stride = data.size() / static_cast<std::size_t>(h);
  for (int r = 0; r < h; ++r) png_write_row(png, data.data() + static_cast<std::size_t>(r) * stride);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST_SUITE("imaging") {
  TEST_CASE("image construction validates shape") {
    CHECK_THROWS_CODE(Image(0, 4, 3), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(Image(4, -1, 3), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(Image(4, 4, 2), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(Image(2, 2, 1, std::vector<std::uint8_t>(5)), ErrorCode::invalid_argument);
    const Image img(3, 5, 3);
    CHECK(img.size() == 45);
    CHECK(img.pixel_count() == 15);
  }

  TEST_CASE("sample index and coordinate are inverse") {
    const Image img(7, 5, 3);
    for (std::size_t i = 0; i < img.size(); ++i) {
      const PixelCoord p = img.coord(i);
      CHECK(img.index(p) == i);
    }
    // Row-major, channels interleaved.
    CHECK(img.index(1, 2, 0) == (1 * 5 + 2) * 3);
  }

  TEST_CASE("png round trip is lossless for RGB and gray") {
    testing::TempDir dir;
    for (int c : {1, 3}) {
      const Image img = testing::random_image(17, 23, c, 99 + static_cast<std::uint64_t>(c));
      const auto path = dir / ("rt" + std::to_string(c) + ".png");
      save_png(img, path);
      CHECK(load_png(path) == img);
    }
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_CODE(load_png("/nonexistent/dir/image.png"), ErrorCode::file_not_found);
  }

  TEST_CASE("non-png and truncated files are unsupported") {
    testing::TempDir dir;
    {
      std::ofstream out(dir / "text.png");
      out << "definitely not a png file";
    }
    CHECK_THROWS_CODE(load_png(dir / "text.png"), ErrorCode::unsupported_format);

    const Image img = testing::random_image(32, 32, 3, 5);
    save_png(img, dir / "full.png");
    std::ifstream in(dir / "full.png", std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
    std::ofstream out(dir / "cut.png", std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    out.close();
    CHECK_THROWS_CODE(load_png(dir / "cut.png"), ErrorCode::unsupported_format);
  }

  TEST_CASE("alpha is rejected") {
    testing::TempDir dir;
    write_raw_png(dir / "rgba.png", 2, 2, PNG_COLOR_TYPE_RGB_ALPHA, 8, std::vector<std::uint8_t>(16, 200));
    CHECK_THROWS_CODE(load_png(dir / "rgba.png"), ErrorCode::unsupported_format);
    write_raw_png(dir / "ga.png", 2, 2, PNG_COLOR_TYPE_GRAY_ALPHA, 8, std::vector<std::uint8_t>(8, 1));
    CHECK_THROWS_CODE(load_png(dir / "ga.png"), ErrorCode::unsupported_format);
    const std::vector<png_color> pal = {{10, 20, 30}, {40, 50, 60}};
    write_raw_png(dir / "trns.png", 2, 2, PNG_COLOR_TYPE_PALETTE, 8, {0, 1, 1, 0}, pal, true);
    CHECK_THROWS_CODE(load_png(dir / "trns.png"), ErrorCode::unsupported_format);
  }

  TEST_CASE("palette and 16-bit files are converted to 8-bit RGB") {
    testing::TempDir dir;
    const std::vector<png_color> pal = {{10, 20, 30}, {40, 50, 60}};
    write_raw_png(dir / "pal.png", 2, 1, PNG_COLOR_TYPE_PALETTE, 8, {1, 0}, pal);
    const Image p = load_png(dir / "pal.png");
    CHECK(p.channels() == 3);
    CHECK(std::vector<std::uint8_t>(p.samples().begin(), p.samples().end()) ==
          std::vector<std::uint8_t>{40, 50, 60, 10, 20, 30});

    // 16-bit RGB: high byte survives.
    write_raw_png(dir / "rgb16.png", 1, 1, PNG_COLOR_TYPE_RGB, 16, {0x12, 0x34, 0xAB, 0xCD, 0xFF, 0x00});
    const Image q = load_png(dir / "rgb16.png");
    CHECK(q.channels() == 3);
    CHECK(q.at(0, 0, 0) == 0x12);
    CHECK(q.at(0, 0, 1) == 0xAB);
    CHECK(q.at(0, 0, 2) == 0xFF);

    write_raw_png(dir / "g16.png", 1, 1, PNG_COLOR_TYPE_GRAY, 16, {0x80, 0x01});
    const Image g = load_png(dir / "g16.png");
    CHECK(g.channels() == 3);
    CHECK(g.at(0, 0, 2) == 0x80);
  }

  TEST_CASE("low bit-depth gray expands to 8 bits") {
    testing::TempDir dir;
    write_raw_png(dir / "g1.png", 8, 1, PNG_COLOR_TYPE_GRAY, 1, {0b10100000});
    const Image g = load_png(dir / "g1.png");
    CHECK(g.channels() == 1);
    CHECK(g.at(0, 0, 0) == 255);
    CHECK(g.at(0, 1, 0) == 0);
    CHECK(g.at(0, 2, 0) == 255);
  }

  TEST_CASE("unwritable destination is an io error") {
    const Image img = testing::random_image(4, 4, 3, 1);
    CHECK_THROWS_CODE(save_png(img, "/nonexistent/dir/out.png"), ErrorCode::io_error);
    testing::TempDir dir;
    // A directory cannot be opened as a file, even by root.
    CHECK_THROWS_CODE(save_png(img, dir.path()), ErrorCode::io_error);
  }

  TEST_CASE("mse") {
    const Image a = testing::constant_image(4, 4, 3, 10);
    Image b = a;
    CHECK(mse(a, b) == 0.0);
    b.at(0, 0, 0) = 14;  // one sample off by 4
    CHECK(mse(a, b) == doctest::Approx(16.0 / 48.0));
    CHECK_THROWS_CODE(mse(a, Image(4, 4, 1)), ErrorCode::dimension_mismatch);
  }

  TEST_CASE("heatmap dump writes a gray png") {
    testing::TempDir dir;
    Plane<double> m(3, 4);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 4; ++y) m(x, y) = x * 4 + y;
    save_heatmap_png(m, dir / "heat.png");
    const Image h = load_png(dir / "heat.png");
    CHECK(h.channels() == 1);
    CHECK(h.at(0, 0, 0) == 0);
    CHECK(h.at(2, 3, 0) == 255);
  }
}
