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
#include <optional>
#include <span>
#include <vector>

#include "fuzzystego/error.hpp"
#include "fuzzystego/imaging.hpp"

namespace fuzzystego {

struct DetectionResult {
  double statistic = 0;  // RS/SPA rate, chi-square p-value, or classifier score
  bool detected = false;
  double threshold = 0;
  /// Set when the detector hit a defined fallback (DegenerateImage,
  /// NumericalFailure) instead of a regular estimate.
  std::optional<ErrorCode> condition;
};

struct DetectorThresholds {
  double rs = 0.018;
  double spa = 0.03;
  double chi2 = 0.95;
};

/// Channel the detectors inspect: green for RGB, the only channel otherwise.
Plane<int> analysis_plane(const Image& img);

/// Relative regular/singular group counts for one image under M = [0,1,1,0].
struct RsCounts {
  double r_m = 0;
  double s_m = 0;
  double r_neg = 0;
  double s_neg = 0;
};

RsCounts rs_counts(const Plane<int>& plane);

/// Fridrich RS estimate of the embedding rate, clamped to [0,1];
/// detected when rate > threshold.
DetectionResult rs_analysis(const Image& img, double threshold = DetectorThresholds{}.rs);

/// Westfeld–Pfitzmann pairs-of-values test over the 256-level histogram
/// pooled across channels. Statistic is the p-value; detected when p >= threshold.
/// Throws InsufficientData with fewer than two usable pairs.
DetectionResult chi_square_attack(const Image& img, double threshold = DetectorThresholds{}.chi2);
DetectionResult chi_square_histogram(std::span<const std::uint64_t, 256> histogram,
                                     double threshold = DetectorThresholds{}.chi2);

/// Sample pair counts over horizontally adjacent samples.
struct SpaCounts {
  std::uint64_t pairs = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t same_pair = 0;  // floor(u/2) == floor(v/2)
};

SpaCounts spa_counts(const Plane<int>& plane);

/// Dumitrescu sample pair analysis, rate clamped to [0,1]; detected when
/// rate > threshold. Throws InvalidArgument when width < 2.
DetectionResult sample_pair_analysis(const Image& img, double threshold = DetectorThresholds{}.spa);

/// [RS rate, SPA rate, chi-square p, |mean(LSB) - 0.5|, adjacent-LSB correlation].
using DetectorFeatures = std::array<double, 5>;

DetectorFeatures detector_features(const Image& img);

/// Linear score w·z over standardized features, thresholded.
struct FeatureDetectorModel {
  bool trained = false;
  DetectorFeatures mean{};
  DetectorFeatures scale{};
  DetectorFeatures weights{};
  double threshold = 0;
  double training_balanced_accuracy = 0;

  double score(const DetectorFeatures& f) const noexcept;
};

/// Diagonal discriminant weights; the threshold maximizes balanced accuracy
/// on the training sets. Throws EmptyTrainingSet.
FeatureDetectorModel train_feature_detector(std::span<const DetectorFeatures> covers,
                                            std::span<const DetectorFeatures> stegos);
FeatureDetectorModel train_feature_detector(std::span<const Image> covers, std::span<const Image> stegos);

/// Throws ModelNotTrained for a default-constructed model.
DetectionResult feature_detector(const DetectorFeatures& features, const FeatureDetectorModel& model);
DetectionResult feature_detector(const Image& img, const FeatureDetectorModel& model);

}  // namespace fuzzystego
