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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzystego/imaging.hpp"

namespace fuzzystego {

/// SplitMix64. The sequence is a pure function of the seed, so every corpus
/// image and every keyed permutation is reproducible from its seed alone.
class Prng {
 public:
  constexpr explicit Prng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) built from the top 53 bits.
  constexpr double next_double() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_double(); }

  /// Unbiased integer in [0, bound) by rejection; bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  void fill(std::span<std::uint8_t> out) noexcept;

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Functional form of one generator step: (output, successor state).
constexpr std::pair<std::uint64_t, Prng> prng_next(Prng p) noexcept {
  const std::uint64_t out = p.next();
  return {out, p};
}

enum class Category : int { smooth = 0, noise = 1, natural_like = 2, textured = 3, mixed = 4 };

inline constexpr std::array<Category, 5> kCategories = {
    Category::smooth, Category::noise, Category::natural_like, Category::textured,
    Category::mixed};

std::string_view category_name(Category c) noexcept;
/// Throws UnknownCategory for anything outside the five fixed names.
Category parse_category(std::string_view name);

struct CorpusSpec {
  int images_per_category = 200;
  int side = 256;
  std::uint64_t master_seed = 42;
};

/// Seed for one image: master_seed XOR (ordinal * 10^6 + index).
std::uint64_t image_seed(Category kind, int index, const CorpusSpec& spec) noexcept;

Image generate_category(Category kind, int index, const CorpusSpec& spec);
Image generate_category(std::string_view kind, int index, const CorpusSpec& spec);

struct ManifestEntry {
  std::filesystem::path relative_path;
  Category category = Category::smooth;
};

/// Writes every image as PNG under `out_dir` plus `manifest.csv`
/// (`<relative_path>,<category>` per line, LF endings).
std::vector<ManifestEntry> generate_corpus(const CorpusSpec& spec,
                                           const std::filesystem::path& out_dir);

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_file);

}  // namespace fuzzystego
