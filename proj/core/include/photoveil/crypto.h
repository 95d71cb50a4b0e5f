/*
 * Copyright 2026 The Photoveil Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHOTOVEIL_CRYPTO_H_
#define PHOTOVEIL_CRYPTO_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "photoveil/bytes.h"
#include "photoveil/random.h"

namespace photoveil {

using Digest = std::array<std::uint8_t, 32>;
using SymmetricKey = std::array<std::uint8_t, 16>;

Digest Sha256(ByteSpan data);
// SHA-256 over the concatenation of all parts.
Digest Sha256(std::initializer_list<ByteSpan> parts);
Digest HmacSha256(ByteSpan key, ByteSpan data);

// 128-bit key from input keying material, separated by `label`.
SymmetricKey DeriveKey(ByteSpan ikm, std::string_view label);

SymmetricKey RandomKey(RandomSource& rng);

// AES-128-GCM. Output layout: 12-byte nonce || ciphertext || 16-byte tag.
inline constexpr std::size_t kAeadOverhead = 12 + 16;
Bytes AeadSeal(const SymmetricKey& key, ByteSpan plaintext, ByteSpan aad,
               RandomSource& rng);
// Throws kIntegrityFailure on any authentication failure.
Bytes AeadOpen(const SymmetricKey& key, ByteSpan sealed, ByteSpan aad);

// Ed25519, raw 32-byte keys and 64-byte signatures.
using SigningSeed = std::array<std::uint8_t, 32>;
using VerifyKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

VerifyKey Ed25519PublicKey(const SigningSeed& seed);
Signature Ed25519Sign(const SigningSeed& seed, ByteSpan message);
bool Ed25519Verify(const VerifyKey& key, ByteSpan message, const Signature& sig);

}  // namespace photoveil

#endif  // PHOTOVEIL_CRYPTO_H_
