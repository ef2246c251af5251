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

#include "fuzzystego/codec.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "fuzzystego/corpus.hpp"
#include "fuzzystego/error.hpp"

namespace fuzzystego {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::fixed1: return "fixed1";
    case Method::fixed2: return "fixed2";
    case Method::adaptive: return "adaptive";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::fixed1, Method::fixed2, Method::adaptive}) {
    if (method_name(m) == name) return m;
  }
  throw Error(ErrorCode::invalid_argument, "unknown method: " + std::string(name));
}

CapacityReport capacity(const DepthMap& depths, int channels) {
  CapacityReport r;
  r.per_pixel = Plane<int>(depths.rows(), depths.cols());
  const auto d = depths.values();
  auto out = r.per_pixel.values();
  for (std::size_t i = 0; i < d.size(); ++i) {
    out[i] = static_cast<int>(d[i]) * channels;
    r.total_bits += out[i];
  }
  return r;
}

std::vector<std::uint32_t> keyed_permutation(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "permutation size must be >= 1");
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  Prng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

double compute_pressure(std::uint64_t payload_bits, int height, int width, int channels) noexcept {
  const double reference = 2.0 * channels * static_cast<double>(height) * width;
  if (reference <= 0) return 0.0;
  return std::clamp(static_cast<double>(payload_bits) / reference, 0.0, 1.0);
}

double payload_budget_bits(double bpp, int height, int width, int channels, Method method, FillPolicy policy) {
  if (!(bpp > 0)) throw Error(ErrorCode::invalid_argument, "bpp must be positive");
  const double pixels = static_cast<double>(height) * width;
  const double target = std::round(bpp * pixels);
  const double samples = pixels * channels;
  double cap = 0;
  double fill = 0;
  switch (method) {
    case Method::fixed1: cap = samples; fill = kFixedFillFactor; break;
    case Method::fixed2: cap = 2.0 * samples; fill = kFixedFillFactor; break;
    case Method::adaptive: cap = samples; fill = kAdaptiveFillFactor; break;
  }
  return policy == FillPolicy::cap ? std::min(target, fill * cap) : fill * std::min(target, cap);
}

std::size_t plan_payload(double bpp, int height, int width, int channels, Method method, FillPolicy policy) {
  const double budget = payload_budget_bits(bpp, height, width, channels, method, policy);
  const double overhead = kHeaderBits + 8.0 * static_cast<double>(kWireOverhead);
  const double bytes = std::floor((budget - overhead) / 8.0);
  return bytes > 0 ? static_cast<std::size_t>(bytes) : 0;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int fixed_depth(Method m) noexcept { return m == Method::fixed2 ? 2 : 1; }

void require_header_room(const Image& img) {
  if (img.size() < static_cast<std::size_t>(kHeaderBits)) {
    throw Error(ErrorCode::capacity_exceeded, "image has fewer than 32 samples for the length header");
  }
}

}  // namespace

DepthMap method_depths(const Image& img, Method method, std::uint64_t wire_bytes, const CodecConfig& cfg,
                       StageTimes* times) {
  if (method != Method::adaptive) {
    return DepthMap(img.height(), img.width(), static_cast<std::uint8_t>(fixed_depth(method)));
  }
  auto t0 = Clock::now();
  const FeatureMaps fm = extract_features(img, cfg.entropy);
  if (times) times->feature += seconds_since(t0);
  t0 = Clock::now();
  const double p = compute_pressure(8 * wire_bytes, img.height(), img.width(), img.channels());
  DepthMap d = depth_map(fm, p, cfg.fuzzy, cfg.pins);
  if (times) times->fuzzy += seconds_since(t0);
  return d;
}

std::int64_t payload_capacity_bits(const DepthMap& depths, int channels, std::span<const std::uint32_t> order) {
  const auto d = depths.values();
  const auto ch = static_cast<std::uint32_t>(channels);
  std::int64_t bits = 0;
  for (std::size_t i = static_cast<std::size_t>(kHeaderBits); i < order.size(); ++i) bits += d[order[i] / ch];
  return bits;
}

Image embed_with_depths(const Image& cover, std::span<const std::uint8_t> wire, const DepthMap& depths,
                        std::uint64_t seed) {
  require_header_room(cover);
  if (depths.rows() != cover.height() || depths.cols() != cover.width()) {
    throw Error(ErrorCode::dimension_mismatch, "depth map does not match the cover");
  }
  if (wire.size() > 0xFFFFFFFFull) throw Error(ErrorCode::capacity_exceeded, "wire longer than the 32-bit header");

  const std::int64_t total = capacity(depths, cover.channels()).total_bits;
  const std::int64_t minimum = kHeaderBits + 8 * static_cast<std::int64_t>(kWireOverhead);
  if (total < minimum) {
    throw Error(ErrorCode::capacity_exceeded, "image capacity of " + std::to_string(total) +
                                                  " bits is below the " + std::to_string(minimum) + "-bit minimum");
  }

  const auto order = keyed_permutation(cover.size(), seed);
  const std::int64_t available = payload_capacity_bits(depths, cover.channels(), order);
  const std::int64_t required = 8 * static_cast<std::int64_t>(wire.size());
  if (required > available) {
    throw Error(ErrorCode::capacity_exceeded, "required " + std::to_string(required + kHeaderBits) +
                                                  " bits, available " + std::to_string(available + kHeaderBits));
  }

  Image stego = cover;
  auto s = stego.samples();
  const auto len = static_cast<std::uint32_t>(wire.size());
  for (int i = 0; i < kHeaderBits; ++i) {
    const auto bit = static_cast<std::uint8_t>((len >> (kHeaderBits - 1 - i)) & 1u);
    auto& sample = s[order[static_cast<std::size_t>(i)]];
    sample = static_cast<std::uint8_t>((sample & 0xFE) | bit);
  }

  const auto d = depths.values();
  const auto ch = static_cast<std::uint32_t>(cover.channels());
  std::int64_t cursor = 0;  // payload bit index, MSB-first within each byte
  for (std::size_t i = static_cast<std::size_t>(kHeaderBits); i < order.size() && cursor < required; ++i) {
    auto& sample = s[order[i]];
    const int depth = d[order[i] / ch];
    for (int pos = depth - 1; pos >= 0 && cursor < required; --pos, ++cursor) {
      const auto byte = wire[static_cast<std::size_t>(cursor >> 3)];
      const auto bit = static_cast<std::uint8_t>((byte >> (7 - (cursor & 7))) & 1u);
      sample = static_cast<std::uint8_t>((sample & ~(1u << pos)) | (bit << pos));
    }
  }
  return stego;
}

std::uint32_t read_header(const Image& stego, std::uint64_t seed) {
  require_header_room(stego);
  const auto order = keyed_permutation(stego.size(), seed);
  const auto s = stego.samples();
  std::uint32_t len = 0;
  for (int i = 0; i < kHeaderBits; ++i) len = (len << 1) | (s[order[static_cast<std::size_t>(i)]] & 1u);
  return len;
}

Bytes extract_with_depths(const Image& stego, const DepthMap& depths, std::uint64_t seed) {
  require_header_room(stego);
  if (depths.rows() != stego.height() || depths.cols() != stego.width()) {
    throw Error(ErrorCode::dimension_mismatch, "depth map does not match the stego image");
  }
  const auto order = keyed_permutation(stego.size(), seed);
  const auto s = stego.samples();
  std::uint32_t len = 0;
  for (int i = 0; i < kHeaderBits; ++i) len = (len << 1) | (s[order[static_cast<std::size_t>(i)]] & 1u);

  const std::int64_t required = 8 * static_cast<std::int64_t>(len);
  const std::int64_t available = payload_capacity_bits(depths, stego.channels(), order);
  if (required > available) {
    throw Error(ErrorCode::malformed_header, "header claims " + std::to_string(len) + " bytes but only " +
                                                 std::to_string(available / 8) + " fit");
  }

  Bytes wire(len, 0);
  const auto d = depths.values();
  const auto ch = static_cast<std::uint32_t>(stego.channels());
  std::int64_t cursor = 0;
  for (std::size_t i = static_cast<std::size_t>(kHeaderBits); i < order.size() && cursor < required; ++i) {
    const auto sample = s[order[i]];
    const int depth = d[order[i] / ch];
    for (int pos = depth - 1; pos >= 0 && cursor < required; --pos, ++cursor) {
      const auto bit = static_cast<std::uint8_t>((sample >> pos) & 1u);
      wire[static_cast<std::size_t>(cursor >> 3)] |= static_cast<std::uint8_t>(bit << (7 - (cursor & 7)));
    }
  }
  return wire;
}

Image embed(const Image& cover, std::span<const std::uint8_t> wire, Method method, std::uint64_t seed,
            const CodecConfig& cfg, StageTimes* times) {
  require_header_room(cover);
  const DepthMap depths = method_depths(cover, method, wire.size(), cfg, times);
  const auto t0 = Clock::now();
  Image stego = embed_with_depths(cover, wire, depths, seed);
  if (times) times->write += seconds_since(t0);
  return stego;
}

Bytes extract(const Image& stego, Method method, std::uint64_t seed, const CodecConfig& cfg) {
  const std::uint32_t len = read_header(stego, seed);
  // Cheap bound before any feature work: no sample holds more than 3 bits.
  const int max_depth = method == Method::adaptive ? 3 : fixed_depth(method);
  const std::int64_t upper = static_cast<std::int64_t>(max_depth) *
                             (static_cast<std::int64_t>(stego.size()) - kHeaderBits);
  if (8 * static_cast<std::int64_t>(len) > upper) {
    throw Error(ErrorCode::malformed_header, "header length " + std::to_string(len) + " exceeds image capacity");
  }
  const DepthMap depths = method_depths(stego, method, len, cfg);
  return extract_with_depths(stego, depths, seed);
}

}  // namespace fuzzystego
