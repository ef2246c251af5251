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

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzystego {

enum class ErrorCode {
  file_not_found,
  unsupported_format,
  io_error,
  dimension_mismatch,
  invalid_argument,
  unknown_category,
  image_too_small,
  kdf_failure,
  malformed_payload,
  capacity_exceeded,
  malformed_header,
  degenerate_image,
  insufficient_data,
  numerical_failure,
  model_not_trained,
  empty_training_set,
  degenerate_variance,
  insufficient_samples,
  corpus_missing,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::file_not_found: return "FileNotFound";
    case ErrorCode::unsupported_format: return "UnsupportedFormat";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::unknown_category: return "UnknownCategory";
    case ErrorCode::image_too_small: return "ImageTooSmall";
    case ErrorCode::kdf_failure: return "KdfFailure";
    case ErrorCode::malformed_payload: return "MalformedPayload";
    case ErrorCode::capacity_exceeded: return "CapacityExceeded";
    case ErrorCode::malformed_header: return "MalformedHeader";
    case ErrorCode::degenerate_image: return "DegenerateImage";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::numerical_failure: return "NumericalFailure";
    case ErrorCode::model_not_trained: return "ModelNotTrained";
    case ErrorCode::empty_training_set: return "EmptyTrainingSet";
    case ErrorCode::degenerate_variance: return "DegenerateVariance";
    case ErrorCode::insufficient_samples: return "InsufficientSamples";
    case ErrorCode::corpus_missing: return "CorpusMissing";
  }
  return "Unknown";
}

}  // namespace fuzzystego
