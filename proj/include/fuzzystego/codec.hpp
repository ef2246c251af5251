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
#include <span>
#include <string_view>
#include <vector>

#include "fuzzystego/crypto.hpp"
#include "fuzzystego/features.hpp"
#include "fuzzystego/fuzzy.hpp"
#include "fuzzystego/imaging.hpp"

namespace fuzzystego {

enum class Method { fixed1, fixed2, adaptive };

std::string_view method_name(Method m) noexcept;
Method parse_method(std::string_view name);

inline constexpr std::uint64_t kDefaultSeed = 42;
/// Big-endian wire length, one bit in each of the first 32 permuted samples.
inline constexpr int kHeaderBits = 32;
inline constexpr double kFixedFillFactor = 0.70;
inline constexpr double kAdaptiveFillFactor = 0.35;

struct CapacityReport {
  std::int64_t total_bits = 0;
  Plane<int> per_pixel;  // depth * channels
};

CapacityReport capacity(const DepthMap& depths, int channels);

/// Fisher–Yates shuffle of 0..n-1 driven by SplitMix64(seed).
std::vector<std::uint32_t> keyed_permutation(std::size_t n, std::uint64_t seed);

/// clip(payload_bits / (2·C·H·W), 0, 1): load relative to a uniform depth-2 embedding.
double compute_pressure(std::uint64_t payload_bits, int height, int width, int channels) noexcept;

/// How the fill factor limits a requested payload.
enum class FillPolicy {
  cap,    ///< budget = min(target, fill · capacity)
  scale,  ///< budget = fill · min(target, capacity)
};

/// Plaintext bytes for a bpp level: floor((budget - 32 - 352) / 8), floored
/// at zero, where target = round(bpp·H·W). Capacity is depth·C·H·W for the
/// fixed methods and the all-shallow C·H·W for the adaptive one (its real
/// depth map is unknown before the payload is chosen).
std::size_t plan_payload(double bpp, int height, int width, int channels, Method method,
                         FillPolicy policy = FillPolicy::cap);

/// Budget in bits behind `plan_payload` (before header/crypto overhead).
double payload_budget_bits(double bpp, int height, int width, int channels, Method method, FillPolicy policy);

struct CodecConfig {
  EntropyConfig entropy;
  FuzzySystem fuzzy = FuzzySystem::standard();
  InputPins pins;
};

/// Wall-clock split of one embedding, in seconds.
struct StageTimes {
  double feature = 0;
  double fuzzy = 0;
  double write = 0;
};

/// Depth map the method uses for a wire of `wire_bytes`: constant for the
/// fixed methods, fuzzy-controlled (from LSB-stripped features) for adaptive.
DepthMap method_depths(const Image& img, Method method, std::uint64_t wire_bytes, const CodecConfig& cfg = {},
                       StageTimes* times = nullptr);

/// Bits the payload region can hold: sum of depths over permuted positions 32..n-1.
std::int64_t payload_capacity_bits(const DepthMap& depths, int channels, std::span<const std::uint32_t> order);

/// Writes header + wire following `order`, using `depths` for payload samples.
/// Throws CapacityExceeded (with required vs available bits).
Image embed_with_depths(const Image& cover, std::span<const std::uint8_t> wire, const DepthMap& depths,
                        std::uint64_t seed);

/// Reads the wire back given the header-independent depth schedule.
Bytes extract_with_depths(const Image& stego, const DepthMap& depths, std::uint64_t seed);

/// Reads only the 32-bit length header.
std::uint32_t read_header(const Image& stego, std::uint64_t seed);

Image embed(const Image& cover, std::span<const std::uint8_t> wire, Method method, std::uint64_t seed = kDefaultSeed,
            const CodecConfig& cfg = {}, StageTimes* times = nullptr);

/// Throws MalformedHeader when the decoded length cannot fit the image,
/// which is what a wrong seed/method or a non-stego image produces.
Bytes extract(const Image& stego, Method method, std::uint64_t seed = kDefaultSeed, const CodecConfig& cfg = {});

}  // namespace fuzzystego
