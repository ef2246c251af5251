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


#include <cmath>

#include "fuzzystego/features.hpp"
#include "support.hpp"

using namespace fuzzystego;

namespace {

int reflect(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

// Direct evaluation of the windowed Shannon entropy: histogram, then sum.
double entropy_oracle(const Plane<double>& g, int x, int y, int r) {
  std::vector<int> hist(64, 0);
  for (int dx = -r; dx <= r; ++dx)
    for (int dy = -r; dy <= r; ++dy)
      ++hist[static_cast<std::size_t>(g(reflect(x + dx, g.rows()), reflect(y + dy, g.cols())) / 4.0)];
  const double n = (2.0 * r + 1) * (2.0 * r + 1);
  double h = 0.0;
  for (int c : hist)
    if (c > 0) h -= (c / n) * std::log2(c / n);
  return h;
}

Plane<double> plane_from(const Image& img) { return to_gray(strip_lower_bits(img)); }

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("strip_lower_bits") {
    Image img(1, 3, 1, {255, 7, 0xAB});
    const Image s = strip_lower_bits(img);
    CHECK(s.at(0, 0, 0) == 248);
    CHECK(s.at(0, 1, 0) == 0);
    CHECK(s.at(0, 2, 0) == 0xA8);
    CHECK(strip_lower_bits(s) == s);
  }

  TEST_CASE("to_gray") {
    Image img(1, 3, 3, {248, 248, 248, 0, 0, 0, 248, 0, 0});
    const auto g = to_gray(img);
    CHECK(g(0, 0) == doctest::Approx(248.0).epsilon(1e-12));
    CHECK(g(0, 1) == 0.0);
    CHECK(g(0, 2) == doctest::Approx(74.152).epsilon(1e-12));
    Image gray(1, 1, 1, {200});
    CHECK(to_gray(gray)(0, 0) == 200.0);
  }

  TEST_CASE("mirror_index is reflect-101") {
    CHECK(mirror_index(-1, 5) == 1);
    CHECK(mirror_index(-2, 5) == 2);
    CHECK(mirror_index(5, 5) == 3);
    CHECK(mirror_index(6, 5) == 2);
    CHECK(mirror_index(3, 5) == 3);
    CHECK(mirror_index(-3, 1) == 0);
    for (int n : {2, 3, 7})
      for (int i = -20; i < 20; ++i) CHECK(mirror_index(i, n) == reflect(i, n));
  }

  TEST_CASE("entropy examples") {
    Plane<double> flat(12, 12, 100.0);
    const auto flat_h = local_entropy(flat);
    for (double v : flat_h.values()) CHECK(v == 0.0);

    // Nine distinct bins in a 3×3 window.
    Plane<double> ramp(8, 8);
    for (int x = 0; x < 8; ++x)
      for (int y = 0; y < 8; ++y) ramp(x, y) = 4.0 * (8 * x + y);
    CHECK(local_entropy(ramp, {1, 64})(3, 3) == doctest::Approx(std::log2(9.0)).epsilon(1e-12));

    Plane<double> halves(9, 9);
    for (int x = 0; x < 9; ++x)
      for (int y = 0; y < 9; ++y) halves(x, y) = y < 4 ? 0.0 : 200.0;
    // Columns 0..3 and 5..8 around y=4 with r=4 at the center row: 4 vs 5 columns.
    const auto h = local_entropy(halves);
    const double p = 4.0 / 9.0;
    CHECK(h(4, 4) == doctest::Approx(-(p * std::log2(p) + (1 - p) * std::log2(1 - p))));
  }

  TEST_CASE("entropy stays within six bits") {
    // An odd window never splits evenly over 64 bins; a 64-step ramp seen
    // through a 9×9 window must still stay under the cap.
    Plane<double> ramp(64, 64);
    for (int x = 0; x < 64; ++x)
      for (int y = 0; y < 64; ++y) ramp(x, y) = 4.0 * ((x * 7 + y * 13) % 64);
    const auto ramp_h = local_entropy(ramp);
    for (double v : ramp_h.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 6.0);
    }
  }

  TEST_CASE("checkerboard at radius 1") {
    Plane<double> board(6, 6);
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 6; ++y) board(x, y) = ((x + y) % 2) ? 160.0 : 8.0;
    const auto h = local_entropy(board, {1, 64});
    const double expected = -(5.0 / 9 * std::log2(5.0 / 9) + 4.0 / 9 * std::log2(4.0 / 9));
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 6; ++y) CHECK(h(x, y) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("entropy matches a direct evaluation") {
    const Image img = testing::random_image(23, 31, 3, 11);
    const auto g = plane_from(img);
    for (int r : {1, 2, 4}) {
      const auto h = local_entropy(g, {r, 64});
      for (int x = 0; x < g.rows(); ++x)
        for (int y = 0; y < g.cols(); ++y) REQUIRE(h(x, y) == doctest::Approx(entropy_oracle(g, x, y, r)).epsilon(1e-12));
    }
  }

  TEST_CASE("entropy config validation") {
    Plane<double> g(5, 5);
    CHECK_THROWS_CODE(local_entropy(g, {4, 32}), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(local_entropy(g, {0, 64}), ErrorCode::invalid_argument);
  }

  TEST_CASE("sobel on a 5x5 step") {
    Plane<double> step(5, 5);
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) step(x, y) = y >= 2 ? 100.0 : 0.0;
    const auto e = edge_magnitude(step);
    // By hand: horizontal response is 4·100 on columns 1 and 2, and the
    // mirrored borders cancel on columns 0, 3 and 4; rows are identical so
    // the vertical response is zero.
    for (int x = 0; x < 5; ++x) {
      CHECK(e(x, 0) == 0.0);
      CHECK(e(x, 1) == 1.0);
      CHECK(e(x, 2) == 1.0);
      CHECK(e(x, 3) == 0.0);
      CHECK(e(x, 4) == 0.0);
    }
  }

  TEST_CASE("sobel on a diagonal ramp") {
    Plane<double> ramp(4, 4);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) ramp(x, y) = 10.0 * x + 20.0 * y;
    const auto e = edge_magnitude(ramp);
    // Interior: gx = 4·(2·20) = 160, gy = 4·(2·10) = 80; borders see zero
    // along the mirrored axis.
    const double interior = std::hypot(160.0, 80.0);
    CHECK(e(1, 1) == doctest::Approx(1.0));
    CHECK(e(0, 1) == doctest::Approx(160.0 / interior));
    CHECK(e(1, 0) == doctest::Approx(80.0 / interior));
    CHECK(e(0, 0) == 0.0);
  }

  TEST_CASE("edge conventions") {
    const auto flat_e = edge_magnitude(Plane<double>(4, 4, 3.0));
    for (double v : flat_e.values()) CHECK(v == 0.0);
    CHECK_THROWS_CODE(edge_magnitude(Plane<double>(2, 5)), ErrorCode::image_too_small);
    CHECK_THROWS_CODE(extract_features(Image(5, 2, 3)), ErrorCode::image_too_small);
    const auto e = edge_magnitude(plane_from(testing::random_image(16, 16, 3, 2)));
    double peak = 0.0;
    for (double v : e.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      peak = std::max(peak, v);
    }
    CHECK(peak == 1.0);
  }

  TEST_CASE("features ignore the three lowest bits") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Image cover = testing::random_image(24, 20, 3, seed);
      Image stego = cover;
      Prng rng(seed + 100);
      for (auto& s : stego.samples()) s = static_cast<std::uint8_t>((s & 0xF8) | (rng.next() & 7));
      CHECK(extract_features(cover) == extract_features(stego));
    }
  }

  TEST_CASE("category entropy levels") {
    const CorpusSpec spec;
    auto mean = [](const Plane<double>& p) {
      double s = 0.0;
      for (double v : p.values()) s += v;
      return s / static_cast<double>(p.size());
    };
    CHECK(mean(extract_features(generate_category(Category::noise, 0, spec)).entropy) > 4.5);
    CHECK(mean(extract_features(generate_category(Category::smooth, 0, spec)).entropy) < 3.0);
  }
}
