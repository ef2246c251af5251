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

#include "fuzzystego/crypto.hpp"

#include <argon2.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <memory>
#include <string>

#include "fuzzystego/error.hpp"

namespace fuzzystego {

std::span<const std::uint8_t> as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

Bytes argon2id(std::span<const std::uint8_t> password, std::span<const std::uint8_t> salt,
               std::span<const std::uint8_t> secret, std::span<const std::uint8_t> associated_data,
               const KdfParams& params) {
  Bytes out(params.output_length);
  // The reference context takes non-const pointers but does not write through
  // them unless the clear_* flags are set.
  argon2_context ctx{};
  ctx.out = out.data();
  ctx.outlen = static_cast<std::uint32_t>(out.size());
  ctx.pwd = const_cast<std::uint8_t*>(password.data());
  ctx.pwdlen = static_cast<std::uint32_t>(password.size());
  ctx.salt = const_cast<std::uint8_t*>(salt.data());
  ctx.saltlen = static_cast<std::uint32_t>(salt.size());
  ctx.secret = const_cast<std::uint8_t*>(secret.data());
  ctx.secretlen = static_cast<std::uint32_t>(secret.size());
  ctx.ad = const_cast<std::uint8_t*>(associated_data.data());
  ctx.adlen = static_cast<std::uint32_t>(associated_data.size());
  ctx.t_cost = params.time_cost;
  ctx.m_cost = params.memory_kib;
  ctx.lanes = params.parallelism;
  ctx.threads = params.parallelism;
  ctx.version = ARGON2_VERSION_13;
  ctx.flags = ARGON2_DEFAULT_FLAGS;
  const int rc = argon2_ctx(&ctx, Argon2_id);
  if (rc != ARGON2_OK) throw Error(ErrorCode::kdf_failure, argon2_error_message(rc));
  return out;
}

Key derive_key(std::span<const std::uint8_t> password, std::span<const std::uint8_t> salt, const KdfParams& params) {
  if (salt.size() != kSaltSize) throw Error(ErrorCode::invalid_argument, "salt must be 16 bytes");
  KdfParams p = params;
  p.output_length = kKeySize;
  const Bytes raw = argon2id(password, salt, {}, {}, p);
  Key key{};
  std::copy(raw.begin(), raw.end(), key.begin());
  return key;
}

namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const noexcept { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

CipherCtx make_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw Error(ErrorCode::io_error, "EVP_CIPHER_CTX_new failed");
  return ctx;
}

void check(int ok, const char* what) {
  if (ok != 1) throw Error(ErrorCode::io_error, std::string("AES-GCM failure in ") + what);
}

}  // namespace

GcmOutput aes256_gcm_encrypt(const Key& key, const Nonce& iv, std::span<const std::uint8_t> plaintext,
                             std::span<const std::uint8_t> aad) {
  auto ctx = make_ctx();
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr), "init");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(iv.size()), nullptr), "ivlen");
  check(EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), iv.data()), "key");
  int len = 0;
  if (!aad.empty()) check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())), "aad");
  GcmOutput out;
  out.ciphertext.resize(plaintext.size());
  if (!plaintext.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &len, plaintext.data(),
                            static_cast<int>(plaintext.size())), "update");
  }
  check(EVP_EncryptFinal_ex(ctx.get(), out.ciphertext.data() + plaintext.size(), &len), "final");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, static_cast<int>(kTagSize), out.tag.data()), "tag");
  return out;
}

std::optional<Bytes> aes256_gcm_decrypt(const Key& key, const Nonce& iv, std::span<const std::uint8_t> ciphertext,
                                        const Tag& tag, std::span<const std::uint8_t> aad) {
  auto ctx = make_ctx();
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr), "init");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(iv.size()), nullptr), "ivlen");
  check(EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), iv.data()), "key");
  int len = 0;
  if (!aad.empty()) check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())), "aad");
  Bytes plain(ciphertext.size());
  if (!ciphertext.empty()) {
    check(EVP_DecryptUpdate(ctx.get(), plain.data(), &len, ciphertext.data(), static_cast<int>(ciphertext.size())),
          "update");
  }
  Tag expected = tag;
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, static_cast<int>(kTagSize), expected.data()), "tag");
  if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + plain.size(), &len) != 1) {
    std::fill(plain.begin(), plain.end(), 0);
    return std::nullopt;
  }
  return plain;
}

void OsEntropy::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(ErrorCode::io_error, "operating system entropy unavailable");
  }
}

WirePayload seal(std::span<const std::uint8_t> plaintext, std::span<const std::uint8_t> password,
                 EntropySource& entropy, const KdfParams& params) {
  WirePayload wp;
  entropy.fill(wp.salt);
  entropy.fill(wp.nonce);
  const Key key = derive_key(password, wp.salt, params);
  GcmOutput enc = aes256_gcm_encrypt(key, wp.nonce, plaintext);
  wp.ciphertext = std::move(enc.ciphertext);
  wp.tag = enc.tag;
  return wp;
}

std::optional<Bytes> open(const WirePayload& wp, std::span<const std::uint8_t> password, const KdfParams& params) {
  const Key key = derive_key(password, wp.salt, params);
  return aes256_gcm_decrypt(key, wp.nonce, wp.ciphertext, wp.tag);
}

Bytes serialize(const WirePayload& wp) {
  Bytes out;
  out.reserve(kWireOverhead + wp.ciphertext.size());
  out.insert(out.end(), wp.salt.begin(), wp.salt.end());
  out.insert(out.end(), wp.nonce.begin(), wp.nonce.end());
  out.insert(out.end(), wp.ciphertext.begin(), wp.ciphertext.end());
  out.insert(out.end(), wp.tag.begin(), wp.tag.end());
  return out;
}

WirePayload deserialize(std::span<const std::uint8_t> wire) {
  if (wire.size() < kWireOverhead) {
    throw Error(ErrorCode::malformed_payload,
                "wire payload of " + std::to_string(wire.size()) + " bytes is shorter than 44");
  }
  WirePayload wp;
  auto it = wire.begin();
  std::copy_n(it, kSaltSize, wp.salt.begin());
  it += kSaltSize;
  std::copy_n(it, kNonceSize, wp.nonce.begin());
  it += kNonceSize;
  const std::size_t body = wire.size() - kWireOverhead;
  wp.ciphertext.assign(it, it + static_cast<std::ptrdiff_t>(body));
  it += static_cast<std::ptrdiff_t>(body);
  std::copy_n(it, kTagSize, wp.tag.begin());
  return wp;
}

}  // namespace fuzzystego
