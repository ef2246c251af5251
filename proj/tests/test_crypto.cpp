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


#include <string>

#include "fuzzystego/crypto.hpp"
#include "support.hpp"

using namespace fuzzystego;

namespace {

Bytes hex(std::string_view s) {
  Bytes out;
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) out.push_back(static_cast<std::uint8_t>(std::stoul(std::string(s.substr(i, 2)), nullptr, 16)));
  return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> hex_array(std::string_view s) {
  const Bytes b = hex(s);
  REQUIRE(b.size() == N);
  std::array<std::uint8_t, N> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

// Cheap parameters; the wire format does not depend on them.
const KdfParams kFast{1, 16, 1, kKeySize};

}  // namespace

TEST_SUITE("crypto") {
  TEST_CASE("argon2id matches the RFC 9106 vector") {
    const Bytes pwd(32, 0x01), salt(16, 0x02), secret(8, 0x03), ad(12, 0x04);
    const Bytes tag = argon2id(pwd, salt, secret, ad, {3, 32, 4, 32});
    CHECK(tag == hex("0d640df58d78766c08c037a34a8b53c9d01ef0452d75b65eb52520e96b01e659"));
  }

  TEST_CASE("derive_key is deterministic and salt-sensitive") {
    const Salt s1{}, s2 = hex_array<16>("000102030405060708090a0b0c0d0e0f");
    const auto pw = as_bytes("correct horse");
    CHECK(derive_key(pw, s1, kFast) == derive_key(pw, s1, kFast));
    CHECK(derive_key(pw, s1, kFast) != derive_key(pw, s2, kFast));
    CHECK(derive_key(as_bytes("other"), s1, kFast) != derive_key(pw, s1, kFast));
    const Bytes short_salt(8, 0);
    CHECK_THROWS_CODE(derive_key(pw, short_salt, kFast), ErrorCode::invalid_argument);
  }

  TEST_CASE("kdf failures surface as KdfFailure") {
    const Salt s{};
    CHECK_THROWS_CODE(derive_key(as_bytes("pw"), s, {0, 16, 1, kKeySize}), ErrorCode::kdf_failure);
  }

  TEST_CASE("gcm published vectors") {
    const Key zero{};
    const Nonce iv0{};
    {
      const auto out = aes256_gcm_encrypt(zero, iv0, {});
      CHECK(out.ciphertext.empty());
      CHECK(out.tag == hex_array<16>("530f8afbc74536b9a963b4f1c4cb738b"));
    }
    {
      const Bytes pt(16, 0);
      const auto out = aes256_gcm_encrypt(zero, iv0, pt);
      CHECK(out.ciphertext == hex("cea7403d4d606b6e074ec5d3baf39d18"));
      CHECK(out.tag == hex_array<16>("d0d1c8a799996bf0265b98b5d48ab919"));
      CHECK(aes256_gcm_decrypt(zero, iv0, out.ciphertext, out.tag) == pt);
    }
    const Key key = hex_array<32>("feffe9928665731c6d6a8f9467308308feffe9928665731c6d6a8f9467308308");
    const Nonce iv = hex_array<12>("cafebabefacedbaddecaf888");
    const Bytes pt = hex(
        "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a72"
        "1c3c0c95956809532fcf0e2449a6b525b16aedf5aa0de657ba637b391aafd255");
    const Bytes ct = hex(
        "522dc1f099567d07f47f37a32a84427d643a8cdcbfe5c0c97598a2bd2555d1aa"
        "8cb08e48590dbb3da7b08b1056828838c5f61e6393ba7a0abcc9f662898015ad");
    {
      const auto out = aes256_gcm_encrypt(key, iv, pt);
      CHECK(out.ciphertext == ct);
      CHECK(out.tag == hex_array<16>("b094dac5d93471bdec1a502270e3cc6c"));
    }
    {
      const Bytes aad = hex("feedfacedeadbeeffeedfacedeadbeefabaddad2");
      const std::span<const std::uint8_t> pt60(pt.data(), 60);
      const auto out = aes256_gcm_encrypt(key, iv, pt60, aad);
      CHECK(out.ciphertext == Bytes(ct.begin(), ct.begin() + 60));
      const Tag tag = hex_array<16>("76fc6ece0f4e1768cddf8853bb2d551b");
      CHECK(out.tag == tag);
      CHECK(aes256_gcm_decrypt(key, iv, out.ciphertext, tag, aad) == Bytes(pt.begin(), pt.begin() + 60));
      Tag bad = tag;
      bad[0] ^= 1;
      CHECK_FALSE(aes256_gcm_decrypt(key, iv, out.ciphertext, bad, aad).has_value());
      CHECK_FALSE(aes256_gcm_decrypt(key, iv, out.ciphertext, tag).has_value());
    }
  }

  TEST_CASE("seal and open round trip") {
    PrngEntropy rng(1);
    for (std::size_t len : {0u, 1u, 15u, 16u, 17u, 100u, 1000u}) {
      Bytes m(len);
      Prng(len).fill(m);
      const auto wp = seal(m, as_bytes("pw"), rng, kFast);
      CHECK(wp.ciphertext.size() == len);
      CHECK(serialize(wp).size() == len + 44);
      CHECK(open(wp, as_bytes("pw"), kFast) == m);
    }
  }

  TEST_CASE("salt and nonce are fresh") {
    PrngEntropy rng(2);
    const Bytes m(10, 7);
    const auto a = seal(m, as_bytes("pw"), rng, kFast);
    const auto b = seal(m, as_bytes("pw"), rng, kFast);
    CHECK(a.nonce != b.nonce);
    CHECK(a.salt != b.salt);
    CHECK(a.ciphertext != b.ciphertext);
    OsEntropy os;
    CHECK(seal(m, as_bytes("pw"), os, kFast).nonce != seal(m, as_bytes("pw"), os, kFast).nonce);
  }

  TEST_CASE("deterministic entropy replays") {
    PrngEntropy a(5), b(5);
    const Bytes m(33, 1);
    CHECK(seal(m, as_bytes("pw"), a, kFast) == seal(m, as_bytes("pw"), b, kFast));
  }

  TEST_CASE("wrong password and tampering give bottom") {
    PrngEntropy rng(3);
    const Bytes m(64, 0x5A);
    const auto wp = seal(m, as_bytes("right"), rng, kFast);
    CHECK_FALSE(open(wp, as_bytes("wrong"), kFast).has_value());
    const Bytes wire = serialize(wp);
    Prng pick(4);
    for (int trial = 0; trial < 200; ++trial) {
      Bytes w = wire;
      const auto bit = pick.below(w.size() * 8);
      w[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      CHECK_FALSE(open(deserialize(w), as_bytes("right"), kFast).has_value());
    }
  }

  TEST_CASE("serialization layout") {
    WirePayload wp;
    for (std::size_t i = 0; i < kSaltSize; ++i) wp.salt[i] = static_cast<std::uint8_t>(i);
    for (std::size_t i = 0; i < kNonceSize; ++i) wp.nonce[i] = static_cast<std::uint8_t>(0x40 + i);
    wp.ciphertext = {0xAA, 0xBB, 0xCC};
    for (std::size_t i = 0; i < kTagSize; ++i) wp.tag[i] = static_cast<std::uint8_t>(0x80 + i);
    const Bytes w = serialize(wp);
    REQUIRE(w.size() == 47);
    CHECK(w[0] == 0);
    CHECK(w[15] == 15);
    CHECK(w[16] == 0x40);
    CHECK(w[27] == 0x4B);
    CHECK(w[28] == 0xAA);
    CHECK(w[30] == 0xCC);
    CHECK(w[31] == 0x80);
    CHECK(w[46] == 0x8F);
    CHECK(deserialize(w) == wp);

    const Bytes empty(44, 9);
    CHECK(deserialize(empty).ciphertext.empty());
    CHECK_THROWS_CODE(deserialize(Bytes(43, 0)), ErrorCode::malformed_payload);
    CHECK_THROWS_CODE(deserialize(Bytes{}), ErrorCode::malformed_payload);
  }

  TEST_CASE("default kdf parameters") {
    const KdfParams p;
    CHECK(p.time_cost == 3);
    CHECK(p.memory_kib == 65536);
    CHECK(p.parallelism == 4);
    CHECK(p.output_length == 32);
    CHECK(kWireOverhead == 44);
  }
}
