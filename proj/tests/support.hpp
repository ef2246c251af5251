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

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "doctest.h"

#include "fuzzystego/corpus.hpp"
#include "fuzzystego/error.hpp"
#include "fuzzystego/imaging.hpp"

namespace testing {

/// Directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fuzzystego_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline fuzzystego::Image random_image(int h, int w, int c, std::uint64_t seed) {
  fuzzystego::Image img(h, w, c);
  fuzzystego::Prng rng(seed);
  rng.fill(img.samples());
  return img;
}

inline fuzzystego::Image constant_image(int h, int w, int c, std::uint8_t v) {
  fuzzystego::Image img(h, w, c);
  for (auto& s : img.samples()) s = v;
  return img;
}

/// Replaces the lowest bit of each sample with a random bit with probability `rate`.
inline fuzzystego::Image randomize_lsb(fuzzystego::Image img, double rate, std::uint64_t seed) {
  fuzzystego::Prng rng(seed);
  for (auto& v : img.samples()) {
    if (rng.next_double() < rate) v = static_cast<std::uint8_t>((v & 0xFE) | (rng.next() >> 63));
  }
  return img;
}

}  // namespace testing

#define CHECK_THROWS_CODE(expr, expected)                          \
  do {                                                             \
    bool thrown_ = false;                                          \
    try {                                                          \
      (void)(expr);                                                \
    } catch (const fuzzystego::Error& e_) {                        \
      thrown_ = true;                                              \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());           \
    }                                                              \
    CHECK_MESSAGE(thrown_, "expected fuzzystego::Error");          \
  } while (false)
