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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fuzzystego/corpus.hpp"

namespace fuzzystego {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kSaltSize = 16;
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;
inline constexpr std::size_t kKeySize = 32;
/// salt + nonce + tag bytes added to every plaintext.
inline constexpr std::size_t kWireOverhead = kSaltSize + kNonceSize + kTagSize;

using Salt = std::array<std::uint8_t, kSaltSize>;
using Nonce = std::array<std::uint8_t, kNonceSize>;
using Tag = std::array<std::uint8_t, kTagSize>;
using Key = std::array<std::uint8_t, kKeySize>;

/// Argon2id cost parameters. Defaults: t=3, m=64 MiB, p=4, 32-byte output.
struct KdfParams {
  std::uint32_t time_cost = 3;
  std::uint32_t memory_kib = 64 * 1024;
  std::uint32_t parallelism = 4;
  std::uint32_t output_length = kKeySize;
};

/// salt ‖ nonce ‖ ciphertext ‖ tag, no length fields.
struct WirePayload {
  Salt salt{};
  Nonce nonce{};
  Bytes ciphertext;
  Tag tag{};

  bool operator==(const WirePayload&) const = default;
};

std::span<const std::uint8_t> as_bytes(std::string_view s) noexcept;

/// Argon2id v1.3 over password and salt (16 bytes). Throws KdfFailure.
Key derive_key(std::span<const std::uint8_t> password, std::span<const std::uint8_t> salt,
               const KdfParams& params = {});

/// Full Argon2id with optional secret and associated data and arbitrary
/// output length; `derive_key` is the secret-less, AD-less special case.
Bytes argon2id(std::span<const std::uint8_t> password, std::span<const std::uint8_t> salt,
               std::span<const std::uint8_t> secret, std::span<const std::uint8_t> associated_data,
               const KdfParams& params);

struct GcmOutput {
  Bytes ciphertext;
  Tag tag{};
};

/// AES-256-GCM with a 96-bit IV and 128-bit tag.
GcmOutput aes256_gcm_encrypt(const Key& key, const Nonce& iv, std::span<const std::uint8_t> plaintext,
                             std::span<const std::uint8_t> aad = {});
/// nullopt when the tag does not verify; no partial plaintext is released.
std::optional<Bytes> aes256_gcm_decrypt(const Key& key, const Nonce& iv, std::span<const std::uint8_t> ciphertext,
                                        const Tag& tag, std::span<const std::uint8_t> aad = {});

/// Source of salt and nonce bytes.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Operating-system randomness (OpenSSL RAND_bytes).
class OsEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic bytes from SplitMix64, for replayable experiments.
class PrngEntropy final : public EntropySource {
 public:
  explicit PrngEntropy(std::uint64_t seed) : rng_(seed) {}
  void fill(std::span<std::uint8_t> out) override { rng_.fill(out); }

 private:
  Prng rng_;
};

/// Encrypts under a key derived from a fresh salt; the nonce is fresh too.
WirePayload seal(std::span<const std::uint8_t> plaintext, std::span<const std::uint8_t> password,
                 EntropySource& entropy, const KdfParams& params = {});

/// Plaintext, or nullopt (⊥) for a wrong password, tampered bytes or a
/// corrupted extraction; the three cases are deliberately indistinguishable.
std::optional<Bytes> open(const WirePayload& wp, std::span<const std::uint8_t> password,
                          const KdfParams& params = {});

Bytes serialize(const WirePayload& wp);
/// Throws MalformedPayload below 44 bytes.
WirePayload deserialize(std::span<const std::uint8_t> wire);

}  // namespace fuzzystego
