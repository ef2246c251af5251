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
#include <span>

#include "fuzzystego/imaging.hpp"

namespace fuzzystego {

inline constexpr int kSsimWindow = 7;
inline constexpr double kKlEpsilon = 1e-10;

/// psnr is +infinity exactly when mse is 0.
struct QualityRecord {
  double psnr = 0;
  double ssim = 0;
  double mse = 0;
  double kl = 0;
};

/// 10·log10(255² / mse). Throws DimensionMismatch.
double psnr(const Image& cover, const Image& stego);

/// Mean SSIM over 7×7 uniform windows (stride 1, valid region), averaged
/// over channels. Throws DimensionMismatch or ImageTooSmall.
double ssim(const Image& cover, const Image& stego);

/// KL divergence in bits between ε-smoothed 256-bin histograms, averaged
/// over channels. Throws DimensionMismatch when channel counts differ.
double kl_divergence(const Image& cover, const Image& stego, double epsilon = kKlEpsilon);

/// Same on raw counts of arbitrary length (equal lengths required).
double kl_divergence_counts(std::span<const double> p_counts, std::span<const double> q_counts,
                            double epsilon = kKlEpsilon);

QualityRecord quality(const Image& cover, const Image& stego);

}  // namespace fuzzystego
