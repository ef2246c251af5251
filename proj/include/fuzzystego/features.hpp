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

#include "fuzzystego/imaging.hpp"

namespace fuzzystego {

struct EntropyConfig {
  int window_radius = 4;  // 9×9 window
  int bins = 64;
};

/// Per-pixel controller state: stripped grayscale, local entropy (bits) and
/// normalized Sobel magnitude. Everything is derived from samples & 0xF8, so
/// any rewrite of bits 0–2 leaves these maps bitwise unchanged.
struct FeatureMaps {
  Plane<double> gray;     // [0, 248]
  Plane<double> entropy;  // [0, 6]
  Plane<double> edge;     // [0, 1]

  bool operator==(const FeatureMaps&) const = default;
};

inline constexpr std::uint8_t kStripMask = 0xF8;

Image strip_lower_bits(const Image& img);

/// Real-valued luma (0.299, 0.587, 0.114); single-channel input is copied.
Plane<double> to_gray(const Image& stripped);

/// Shannon entropy of floor(g/4) over a (2r+1)² mirror-padded window.
/// Throws InvalidArgument unless cfg.bins == 64 and radius >= 1.
Plane<double> local_entropy(const Plane<double>& gray, const EntropyConfig& cfg = {});

/// Sobel magnitude divided by its global maximum; all zero on flat input.
/// Throws ImageTooSmall when either side is below 3.
Plane<double> edge_magnitude(const Plane<double>& gray);

FeatureMaps extract_features(const Image& img, const EntropyConfig& cfg = {});

/// Reflect-101 index for mirror padding ("d c b | a b c d | c b a").
int mirror_index(int i, int n) noexcept;

}  // namespace fuzzystego
