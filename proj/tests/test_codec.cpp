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


#include <algorithm>
#include <set>
#include <string>

#include "fuzzystego/codec.hpp"
#include "fuzzystego/crypto.hpp"
#include "support.hpp"

using namespace fuzzystego;

namespace {

const KdfParams kFast{1, 16, 1, kKeySize};
constexpr Method kMethods[] = {Method::fixed1, Method::fixed2, Method::adaptive};
constexpr double kBpp[] = {0.05, 0.10, 0.20, 0.30, 0.40};

// Fisher–Yates written out with a separate draw routine.
std::vector<std::uint32_t> permutation_oracle(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>(i);
  std::uint64_t state = seed;
  auto draw = [&state] {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::uint64_t bound = i + 1;
    std::uint64_t r;
    do r = draw(); while (r < (-bound) % bound);
    std::swap(v[i], v[r % bound]);
  }
  return v;
}

// Fixed-depth-1 embedding as a plain bit stream: 32 header bits then payload.
Image naive_fixed1(const Image& cover, const Bytes& wire, std::uint64_t seed) {
  const auto order = permutation_oracle(cover.size(), seed);
  std::vector<int> bits;
  for (int i = 31; i >= 0; --i) bits.push_back(static_cast<int>((wire.size() >> i) & 1));
  for (auto b : wire)
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
  Image out = cover;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    auto& s = out.samples()[order[k]];
    s = static_cast<std::uint8_t>((s & 0xFE) | bits[k]);
  }
  return out;
}

Bytes random_bytes(std::size_t n, std::uint64_t seed) {
  Bytes b(n);
  Prng(seed).fill(b);
  return b;
}

Image cover_for(int trial, int side) {
  CorpusSpec spec;
  spec.side = side;
  return generate_category(kCategories[static_cast<std::size_t>(trial) % 5], trial, spec);
}

}  // namespace

TEST_SUITE("codec") {
  TEST_CASE("method names") {
    for (Method m : kMethods) CHECK(parse_method(method_name(m)) == m);
    CHECK_THROWS_CODE(parse_method("lsb9"), ErrorCode::invalid_argument);
  }

  TEST_CASE("capacity") {
    CHECK(capacity(DepthMap(256, 256, 1), 3).total_bits == 196608);
    CHECK(capacity(DepthMap(256, 256, 3), 3).total_bits == 589824);
    DepthMap d(13, 17);
    Prng rng(1);
    std::int64_t sum = 0;
    for (auto& v : d.values()) {
      v = static_cast<std::uint8_t>(1 + rng.below(3));
      sum += v * 3;
    }
    const auto r = capacity(d, 3);
    CHECK(r.total_bits == sum);
    for (int x = 0; x < 13; ++x)
      for (int y = 0; y < 17; ++y) CHECK(r.per_pixel(x, y) == 3 * d(x, y));
  }

  TEST_CASE("keyed permutation") {
    CHECK(keyed_permutation(1, 99) == std::vector<std::uint32_t>{0});
    CHECK(keyed_permutation(500, 7) == keyed_permutation(500, 7));
    CHECK(keyed_permutation(500, 7) != keyed_permutation(500, 8));
    CHECK_THROWS_CODE(keyed_permutation(0, 1), ErrorCode::invalid_argument);
    Prng rng(3);
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 1 + rng.below(10000);
      auto p = keyed_permutation(n, t);
      CHECK(p == permutation_oracle(n, t));
      std::sort(p.begin(), p.end());
      bool identity = true;
      for (std::size_t i = 0; i < n; ++i) identity = identity && p[i] == i;
      CHECK(identity);
    }
  }

  TEST_CASE("pressure") {
    CHECK(compute_pressure(0, 256, 256, 3) == 0.0);
    CHECK(compute_pressure(2 * 3 * 256 * 256, 256, 256, 3) == 1.0);
    CHECK(compute_pressure(3 * 256 * 256, 256, 256, 3) == 0.5);
    CHECK(compute_pressure(1u << 30, 16, 16, 3) == 1.0);
  }

  TEST_CASE("payload planning") {
    CHECK(payload_budget_bits(0.05, 256, 256, 3, Method::fixed1, FillPolicy::cap) == 3277.0);
    CHECK(plan_payload(0.05, 256, 256, 3, Method::fixed1) == 361);
    CHECK(plan_payload(0.001, 256, 256, 3, Method::fixed1) == 0);
    // Cap not binding at 0.40 for fixed1: min(26214, 0.70·196608) = 26214.
    CHECK(payload_budget_bits(0.40, 256, 256, 3, Method::fixed1, FillPolicy::cap) == 26214.0);
    CHECK(plan_payload(0.40, 256, 256, 3, Method::fixed1) == (26214 - 384) / 8);
    // Adaptive cap: 0.35 of the all-shallow capacity.
    CHECK(payload_budget_bits(20.0, 256, 256, 3, Method::adaptive, FillPolicy::cap) ==
          doctest::Approx(0.35 * 196608));
    // Scale policy multiplies the target itself.
    CHECK(payload_budget_bits(0.05, 256, 256, 3, Method::fixed1, FillPolicy::scale) ==
          doctest::Approx(0.70 * 3277));
    CHECK(payload_budget_bits(0.05, 256, 256, 3, Method::adaptive, FillPolicy::scale) ==
          doctest::Approx(0.35 * 3277));
    CHECK_THROWS_CODE(plan_payload(0.0, 8, 8, 3, Method::fixed1), ErrorCode::invalid_argument);
  }

  TEST_CASE("end-to-end recovery for every method and bpp level") {
    constexpr int kTrials = 100;
    constexpr int kSide = 96;
    for (Method m : kMethods) {
      for (double bpp : kBpp) {
        int ok = 0;
        for (int t = 0; t < kTrials; ++t) {
          const Image cover = cover_for(t, kSide);
          const std::uint64_t seed = 1000u * static_cast<std::uint64_t>(t) + 17;
          const std::string pw = "pw-" + std::to_string(t);
          const Bytes msg = random_bytes(plan_payload(bpp, kSide, kSide, 3, m), seed);
          PrngEntropy ent(seed);
          const Bytes wire = serialize(seal(msg, as_bytes(pw), ent, kFast));
          const Image stego = embed(cover, wire, m, seed);
          const Bytes got = extract(stego, m, seed);
          ok += got == wire && open(deserialize(got), as_bytes(pw), kFast) == msg;
        }
        CHECK_MESSAGE(ok == kTrials, method_name(m), " at ", bpp);
      }
    }
  }

  TEST_CASE("adaptive depth maps agree between cover and stego") {
    for (int t = 0; t < 20; ++t) {
      const Image cover = cover_for(t, 64);
      const Bytes wire = random_bytes(200 + 20 * static_cast<std::size_t>(t), t);
      const Image stego = embed(cover, wire, Method::adaptive, t);
      CHECK(method_depths(cover, Method::adaptive, wire.size()) == method_depths(stego, Method::adaptive, wire.size()));
    }
  }

  TEST_CASE("only planned samples change, within their depth") {
    for (Method m : kMethods) {
      for (int t = 0; t < 10; ++t) {
        const Image cover = cover_for(t, 48);
        const Bytes wire = random_bytes(150, 50 + t);
        const std::uint64_t seed = 5 + static_cast<std::uint64_t>(t);
        const Image stego = embed(cover, wire, m, seed);
        const DepthMap d = method_depths(cover, m, wire.size());
        const auto order = permutation_oracle(cover.size(), seed);

        // Positions the bit stream reaches, with their write depth.
        std::vector<int> depth_at(cover.size(), 0);
        for (std::size_t k = 0; k < 32; ++k) depth_at[order[k]] = 1;
        std::int64_t left = 8 * static_cast<std::int64_t>(wire.size());
        for (std::size_t k = 32; k < order.size() && left > 0; ++k) {
          const int dk = d.values()[order[k] / 3];
          depth_at[order[k]] = dk;
          left -= dk;
        }
        const int max_diff = m == Method::fixed1 ? 1 : m == Method::fixed2 ? 3 : 7;
        for (std::size_t i = 0; i < cover.size(); ++i) {
          const int a = cover.samples()[i], b = stego.samples()[i];
          if (depth_at[i] == 0) {
            REQUIRE(a == b);
          } else {
            REQUIRE(((a ^ b) >> depth_at[i]) == 0);
            REQUIRE(std::abs(a - b) <= max_diff);
          }
        }
      }
    }
  }

  TEST_CASE("fixed1 equals a plain LSB stream and the constant-depth pipeline") {
    for (int t = 0; t < 10; ++t) {
      const Image cover = testing::random_image(12, 15, 3, t);
      const Bytes wire = random_bytes(static_cast<std::size_t>(3 * t + 1), 80 + t);
      const Image stego = embed(cover, wire, Method::fixed1, t);
      CHECK(stego == naive_fixed1(cover, wire, t));
      CHECK(stego == embed_with_depths(cover, wire, DepthMap(12, 15, 1), t));
    }
  }

  TEST_CASE("empty payload touches only the header") {
    for (Method m : kMethods) {
      const Image cover = cover_for(2, 64);
      const Image stego = embed(cover, Bytes{}, m, 9);
      int differing = 0;
      for (std::size_t i = 0; i < cover.size(); ++i) differing += cover.samples()[i] != stego.samples()[i];
      CHECK(differing <= 32);
      CHECK(extract(stego, m, 9).empty());
      CHECK(read_header(stego, 9) == 0);
    }
  }

  TEST_CASE("wrong seed fails") {
    for (Method m : kMethods) {
      int failures = 0;
      for (int t = 0; t < 100; ++t) {
        const Image cover = cover_for(t, 48);
        const Bytes msg = random_bytes(40, t);
        PrngEntropy ent(t);
        const Bytes wire = serialize(seal(msg, as_bytes("pw"), ent, kFast));
        const Image stego = embed(cover, wire, m, 42);
        try {
          const Bytes got = extract(stego, m, 43 + static_cast<std::uint64_t>(t));
          failures += !open(deserialize(got), as_bytes("pw"), kFast).has_value();
        } catch (const Error& e) {
          failures += e.code() == ErrorCode::malformed_header || e.code() == ErrorCode::malformed_payload;
        }
      }
      CHECK_MESSAGE(failures >= 99, method_name(m));
    }
  }

  TEST_CASE("cropping one row breaks extraction") {
    for (Method m : kMethods) {
      const Image cover = cover_for(3, 64);
      const Bytes msg = random_bytes(100, 3);
      PrngEntropy ent(3);
      const Bytes wire = serialize(seal(msg, as_bytes("pw"), ent, kFast));
      const Image stego = embed(cover, wire, m, 42);
      const auto s = stego.samples();
      const Image cropped(63, 64, 3, std::vector<std::uint8_t>(s.begin(), s.end() - 64 * 3));
      bool failed = false;
      try {
        failed = !open(deserialize(extract(cropped, m, 42)), as_bytes("pw"), kFast).has_value();
      } catch (const Error&) {
        failed = true;
      }
      CHECK(failed);
    }
  }

  TEST_CASE("capacity errors") {
    const Image cover = testing::random_image(8, 8, 3, 1);  // 192 samples
    try {
      (void)embed(cover, Bytes(100, 0), Method::fixed2, 1);
      FAIL("expected CapacityExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::capacity_exceeded);
      CHECK(std::string(e.what()).find("required 832") != std::string::npos);
      CHECK(std::string(e.what()).find("available 352") != std::string::npos);
    }
    // Below the header plus crypto minimum.
    CHECK_THROWS_CODE(embed(testing::random_image(5, 5, 3, 2), Bytes{}, Method::fixed1, 1), ErrorCode::capacity_exceeded);
    CHECK_THROWS_CODE(embed(Image(2, 3, 3), Bytes{}, Method::fixed1, 1), ErrorCode::capacity_exceeded);
    CHECK_THROWS_CODE(embed_with_depths(cover, Bytes{}, DepthMap(4, 4, 1), 1), ErrorCode::dimension_mismatch);
  }

  TEST_CASE("a header claiming too much is malformed") {
    Image img = testing::random_image(16, 16, 3, 4);
    const auto order = keyed_permutation(img.size(), 1);
    for (int i = 0; i < 32; ++i) img.samples()[order[static_cast<std::size_t>(i)]] |= 1;  // 0xFFFFFFFF
    for (Method m : kMethods) CHECK_THROWS_CODE(extract(img, m, 1), ErrorCode::malformed_header);
  }
}
