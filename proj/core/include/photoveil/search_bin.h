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

#ifndef PHOTOVEIL_SEARCH_BIN_H_
#define PHOTOVEIL_SEARCH_BIN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "photoveil/crypto.h"
#include "photoveil/descriptor.h"
#include "photoveil/encrypted_distance.h"
#include "photoveil/paillier.h"

// Binary descriptor search. Each stored bit x_k becomes a two-row gate: the
// row unlocked by wire key gamma_b holds E(x_k XOR b). A querier holding the
// labels and seed sends gamma_{y_k} per bit; the cloud opens one row per gate
// and multiplies the ciphertexts into E(hamming(x, y)).
namespace photoveil::bin {

using WireKey = std::array<std::uint8_t, 16>;
using Seed = std::array<std::uint8_t, 32>;
using RowTag = std::array<std::uint8_t, 16>;

struct SearchKeys {
  paillier::PublicKey pk;
  paillier::SecretKey sk;
  WireKey k0{};
  WireKey k1{};
  Seed s{};

  Bytes Serialize() const;
  static SearchKeys Parse(ByteSpan data);
};

SearchKeys GenerateSearchKeys(std::size_t prime_bits, RandomSource& rng,
                              bool allow_small_primes = false);

// gamma = first 16 bytes of SHA256(SHA256^k(s) || label), k >= 1.
WireKey DeriveWireKey(const Seed& s, std::size_t k, const WireKey& label);
WireKey DeriveWireKey(const SearchKeys& keys, std::size_t k, int bit);

// Caches the hash chain SHA256^1(s) .. SHA256^dim(s) so a whole vector costs
// dim hashes instead of dim^2/2.
class WireKeyChain {
 public:
  WireKeyChain(const SearchKeys& keys, std::size_t dim);
  // 1-based position.
  WireKey Key(std::size_t k, int bit) const;
  std::size_t dim() const { return chain_.size(); }

 private:
  std::vector<Digest> chain_;
  WireKey k0_;
  WireKey k1_;
};

// First 16 bytes of SHA256(gamma || 0x01); lets the evaluator find its row
// without trial decryption.
RowTag TagForKey(const WireKey& key);

struct GateRow {
  RowTag tag{};
  Bytes payload;  // AEAD under gamma of a serialized Paillier ciphertext

  bool operator==(const GateRow&) const = default;
};

struct GarbledGate {
  std::array<GateRow, 2> rows;

  bool operator==(const GarbledGate&) const = default;
};

using GarbledVector = std::vector<GarbledGate>;

// How the two payload ciphertexts of a gate are produced.
enum class GateRandomness {
  // One fresh encryption E(x_k) per gate; the other row is E(1 - x_k),
  // derived as g * E(x_k)^-1. Either row is computable from the other, so
  // holding both reveals nothing beyond holding one.
  kComplementary,
  // Two independent fresh encryptions per gate.
  kIndependent,
};

GarbledVector GarbleVector(const FeatureVector& x, const SearchKeys& keys,
                           RandomSource& rng,
                           GateRandomness mode = GateRandomness::kComplementary);

struct SearchBag {
  paillier::PublicKey pk;
  std::size_t dim = 0;
  std::vector<GarbledVector> vectors;

  // Layout: u8 variant(1) | blob n | u32 vectors | per vector: u32 gates |
  // per gate 2 x (16-byte tag | u32 payload length | payload).
  Bytes Serialize() const;
  static SearchBag Parse(ByteSpan data);
};

SearchBag GarbleDescriptor(const Descriptor& x, const SearchKeys& keys,
                           RandomSource& rng,
                           GateRandomness mode = GateRandomness::kComplementary);

struct GarbledInput {
  std::vector<WireKey> keys;  // keys[k-1] = gamma for bit y_k
};

GarbledInput EncodeQuery(const FeatureVector& y, const SearchKeys& keys);

struct QueryEncoding {
  std::size_t dim = 0;
  std::vector<GarbledInput> vectors;

  Bytes Serialize() const;
  static QueryEncoding Parse(ByteSpan data);
};

QueryEncoding EncodeQueryDescriptor(const Descriptor& y, const SearchKeys& keys);

// Throws kDimMismatch, kNoMatchingRow (no row tag matches the input key)
// and kAuthFailure (payload fails authentication).
paillier::Ciphertext CloudEval(const GarbledVector& gates,
                               const GarbledInput& input,
                               const paillier::PublicKey& pk);

EncryptedDistanceMatrix CloudEvalMatrix(const SearchBag& bag,
                                        const QueryEncoding& query,
                                        std::size_t image_index = 0);

}  // namespace photoveil::bin

#endif  // PHOTOVEIL_SEARCH_BIN_H_
