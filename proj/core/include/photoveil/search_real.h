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

#ifndef PHOTOVEIL_SEARCH_REAL_H_
#define PHOTOVEIL_SEARCH_REAL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "photoveil/descriptor.h"
#include "photoveil/encrypted_distance.h"
#include "photoveil/numeric.h"
#include "photoveil/paillier.h"

// Real-valued descriptor search. The owner publishes, per dimension k of
// every stored vector x, E(x_k^2) and E(-r_k * x_k). A querier holding r
// sends r_k^-1 * y_k in the clear plus E(y_k^2), and the cloud combines
// them into E(sum_k (x_k - y_k)^2) without any secret key material.
namespace photoveil::real {

struct SearchKeys {
  paillier::PublicKey pk;
  paillier::SecretKey sk;
  std::vector<BigInt> r;  // per-dimension blinding, units mod n
  FixedPointParams fixed;

  std::size_t dim() const { return r.size(); }

  Bytes Serialize() const;
  static SearchKeys Parse(ByteSpan data);
};

// Throws kOutOfRange if the modulus cannot hold dim-dimensional squared
// distances under `fixed`.
SearchKeys GenerateSearchKeys(std::size_t dim, std::size_t prime_bits,
                              RandomSource& rng, FixedPointParams fixed = {},
                              bool allow_small_primes = false);

struct BagVector {
  std::vector<paillier::Ciphertext> c_sq;  // E(f(x_k)^2)
  std::vector<paillier::Ciphertext> c_rx;  // E(-r_k * f(x_k))
};

struct SearchBag {
  paillier::PublicKey pk;
  std::size_t dim = 0;
  std::vector<BagVector> vectors;

  // Layout: u8 variant(0) | blob n | u32 vectors | u32 dim | u32 ct_bytes |
  // per vector: dim x c_sq then dim x c_rx, each ct_bytes wide.
  Bytes Serialize() const;
  static SearchBag Parse(ByteSpan data);
};

SearchBag OwnerEncryptDescriptor(const Descriptor& x, const SearchKeys& keys,
                                 RandomSource& rng);

struct QueryVector {
  std::vector<BigInt> c1;                // r_k^-1 * f(y_k) mod n
  std::vector<paillier::Ciphertext> c2;  // E(f(y_k)^2)
};

struct QueryEncoding {
  std::size_t dim = 0;
  std::vector<QueryVector> vectors;

  Bytes Serialize(const paillier::PublicKey& pk) const;
  static QueryEncoding Parse(const paillier::PublicKey& pk, ByteSpan data);
};

// Needs only pk and r; the secret key is never touched.
QueryEncoding QuerierEncode(const Descriptor& y, const paillier::PublicKey& pk,
                            std::span<const BigInt> r,
                            const FixedPointParams& fixed, RandomSource& rng);

// E(sum_k (f(x_k) - f(y_k))^2) from public material only.
paillier::Ciphertext CloudDistance(const BagVector& x, const QueryVector& y,
                                   const paillier::PublicKey& pk);

EncryptedDistanceMatrix CloudDistanceMatrix(const SearchBag& bag,
                                            const QueryEncoding& query,
                                            std::size_t image_index = 0);

}  // namespace photoveil::real

#endif  // PHOTOVEIL_SEARCH_REAL_H_
