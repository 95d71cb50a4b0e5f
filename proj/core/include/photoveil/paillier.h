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

#ifndef PHOTOVEIL_PAILLIER_H_
#define PHOTOVEIL_PAILLIER_H_

#include <cstddef>
#include <cstdint>

#include "photoveil/bigint.h"
#include "photoveil/bytes.h"
#include "photoveil/numeric.h"
#include "photoveil/random.h"

namespace photoveil::paillier {

// Public key with the g = n + 1 generator. Ciphertexts and key components
// serialize as fixed-width big-endian byte strings.
class PublicKey {
 public:
  PublicKey() = default;
  explicit PublicKey(BigInt n);

  const BigInt& n() const { return n_; }
  const BigInt& g() const { return g_; }
  const BigInt& n_squared() const { return n_squared_; }
  // Short fingerprint of n; ciphertexts carry it to detect key mixing.
  std::uint64_t id() const { return id_; }
  std::size_t modulus_bits() const { return BitLength(n_); }
  std::size_t modulus_bytes() const { return ByteLength(n_); }
  std::size_t ciphertext_bytes() const { return ByteLength(n_squared_); }

  bool operator==(const PublicKey& other) const { return n_ == other.n_; }

 private:
  BigInt n_;
  BigInt g_;
  BigInt n_squared_;
  std::uint64_t id_ = 0;
};

class SecretKey {
 public:
  SecretKey() = default;
  SecretKey(BigInt lambda, BigInt mu, BigInt n);
  // With the factors, Decrypt works mod p^2 and q^2 and recombines.
  SecretKey(BigInt lambda, BigInt mu, BigInt n, BigInt p, BigInt q);

  const BigInt& lambda() const { return lambda_; }
  const BigInt& mu() const { return mu_; }
  const BigInt& n() const { return n_; }
  const BigInt& n_squared() const { return n_squared_; }
  bool has_factors() const { return p_ != 0; }
  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }

  // Plaintext of a unit c mod n^2; Decrypt validates before calling this.
  BigInt Open(const BigInt& c) const;

 private:

  BigInt lambda_;
  BigInt mu_;
  BigInt n_;
  BigInt n_squared_;
  BigInt p_ = 0;
  BigInt q_ = 0;
  BigInt p_squared_;
  BigInt q_squared_;
  BigInt h_p_;      // L_p(g^(p-1) mod p^2)^-1 mod p
  BigInt h_q_;
  BigInt q_inv_p_;  // q^-1 mod p
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

struct Ciphertext {
  BigInt value;
  std::uint64_t key_id = 0;

  bool operator==(const Ciphertext& other) const {
    return value == other.value && key_id == other.key_id;
  }
};

// Two distinct primes of `prime_bits` each; n has exactly 2*prime_bits bits.
// Throws kInvalidArgument for prime_bits < 256 unless allow_small is set
// (tests exercising tiny moduli only).
KeyPair GenerateKeyPair(std::size_t prime_bits, RandomSource& rng,
                        bool allow_small = false);

// Builds keys from known primes.
KeyPair KeyPairFromPrimes(const BigInt& p, const BigInt& q);

// E(m) = (1 + m*n) * r^n mod n^2, fresh r per call. Requires 0 <= m < n.
Ciphertext Encrypt(const PublicKey& pk, const BigInt& m, RandomSource& rng);
Ciphertext Encrypt(const PublicKey& pk, const SignedResidue& m,
                   RandomSource& rng);
// Throws kInvalidRandomizer unless gcd(r, n) == 1 and 0 < r < n.
Ciphertext EncryptWithRandomizer(const PublicKey& pk, const BigInt& m,
                                 const BigInt& r);

// Throws kMalformedCiphertext if c is outside [0, n^2) or not a unit.
BigInt Decrypt(const SecretKey& sk, const Ciphertext& c);

// E(m1 + m2). Throws kKeyMismatch when either operand is from another key.
Ciphertext HomAdd(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
// E(m * k) for 0 <= k < n.
Ciphertext HomScale(const PublicKey& pk, const Ciphertext& c, const BigInt& k);
// E(k - m) = g^k * c^-1. Shares c's randomness (inverted); no fresh
// exponentiation.
Ciphertext HomConstMinus(const PublicKey& pk, const BigInt& k,
                         const Ciphertext& c);

Bytes SerializeCiphertext(const PublicKey& pk, const Ciphertext& c);
// Validates range and unit-ness; throws kMalformedCiphertext.
Ciphertext ParseCiphertext(const PublicKey& pk, ByteSpan data);

Bytes SerializePublicKey(const PublicKey& pk);
PublicKey ParsePublicKey(ByteSpan data);
Bytes SerializeSecretKey(const SecretKey& sk);
SecretKey ParseSecretKey(ByteSpan data);

}  // namespace photoveil::paillier

#endif  // PHOTOVEIL_PAILLIER_H_
