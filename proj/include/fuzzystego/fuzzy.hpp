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
#include <optional>

#include "json.hpp"

#include "fuzzystego/features.hpp"
#include "fuzzystego/imaging.hpp"

namespace fuzzystego {

/// Trapezoidal membership function with a <= b <= c <= d.
struct Trapezoid {
  double a = 0;
  double b = 0;
  double c = 0;
  double d = 0;

  bool valid() const noexcept { return a <= b && b <= c && c <= d; }
  bool operator==(const Trapezoid&) const = default;
};

/// max(min((x-a)/(b-a), 1, (d-x)/(d-c)), 0). A vertical shoulder (a == b or
/// c == d) counts as 1 inside the support and 0 outside it.
double trapezoid_mu(double x, const Trapezoid& t) noexcept;

enum class InputLabel : std::uint8_t { low = 0, medium = 1, high = 2 };
enum class DepthLabel : std::uint8_t { shallow = 0, moderate = 1, deep = 2 };

/// Mamdani controller: three inputs (entropy, edge, pressure) on [0,1], one
/// output (embedding depth) on [1,3], and a total 27-entry rule table.
struct FuzzySystem {
  std::array<Trapezoid, 3> entropy;
  std::array<Trapezoid, 3> edge;
  std::array<Trapezoid, 3> pressure;
  std::array<Trapezoid, 3> depth;
  /// Consequent for (entropy, edge, pressure) at index 9*h + 3*e + p.
  std::array<DepthLabel, 27> rules{};

  DepthLabel consequent(InputLabel h, InputLabel e, InputLabel p) const noexcept {
    return rules[9 * static_cast<int>(h) + 3 * static_cast<int>(e) + static_cast<int>(p)];
  }

  /// The default controller shipped in config/fuzzy_default.json.
  static FuzzySystem standard();

  /// Throws InvalidArgument on malformed trapezoids.
  void validate() const;

  bool operator==(const FuzzySystem&) const = default;
};

nlohmann::json to_json(const FuzzySystem& sys);
/// Requires every (entropy, edge, pressure) triple exactly once.
FuzzySystem fuzzy_system_from_json(const nlohmann::json& j);
FuzzySystem load_fuzzy_system(const std::filesystem::path& path);
void save_fuzzy_system(const FuzzySystem& sys, const std::filesystem::path& path);

struct DepthInference {
  double d_star = 1.0;  // centroid in [1,3]
  int depth = 1;        // clip(floor(d_star + 0.5), 1, 3)
  bool degenerate = false;
};

/// Number of samples over [1,3] used by the discretized centroid.
inline constexpr int kCentroidPoints = 201;

/// Single-pixel inference. Inputs are clamped to [0,1]. An all-zero
/// aggregate falls back to depth 1.
DepthInference infer_depth(double h_norm, double e, double p, const FuzzySystem& sys);

/// Per-pixel depth in {1,2,3}.
using DepthMap = Plane<std::uint8_t>;

/// Optional fixed values that replace a fuzzy input (used by ablations).
struct InputPins {
  std::optional<double> entropy;
  std::optional<double> edge;
  std::optional<double> pressure;

  bool operator==(const InputPins&) const = default;
};

/// Entropy is normalized by 6 bits before fuzzification.
DepthMap depth_map(const FeatureMaps& fm, double p, const FuzzySystem& sys, const InputPins& pins = {});

}  // namespace fuzzystego
