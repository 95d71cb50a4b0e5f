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

#include "photoveil/paillier.h"

#include "photoveil/crypto.h"
#include "photoveil/error.h"

namespace photoveil::paillier {

namespace {

std::uint64_t Fingerprint(const BigInt& n) {
  const Digest d = Sha256(ToBytes(n));
  std::uint64_t id = 0;
  for (int i = 0; i < 8; ++i) id = id << 8 | d[i];
  return id;
}

void CheckKey(const PublicKey& pk, const Ciphertext& c) {
  if (c.key_id != pk.id()) {
    Fail(ErrorCode::kKeyMismatch, "ciphertext belongs to a different key");
  }
}

// L(u) = (u - 1) / n
BigInt L(const BigInt& u, const BigInt& n) { return (u - 1) / n; }

}  // namespace

PublicKey::PublicKey(BigInt n)
    : n_(std::move(n)), g_(n_ + 1), n_squared_(n_ * n_), id_(Fingerprint(n_)) {
  if (n_ <= 2) Fail(ErrorCode::kInvalidArgument, "Paillier modulus too small");
}

SecretKey::SecretKey(BigInt lambda, BigInt mu, BigInt n)
    : lambda_(std::move(lambda)),
      mu_(std::move(mu)),
      n_(std::move(n)),
      n_squared_(n_ * n_) {}

SecretKey::SecretKey(BigInt lambda, BigInt mu, BigInt n, BigInt p, BigInt q)
    : SecretKey(std::move(lambda), std::move(mu), std::move(n)) {
  if (p <= 1 || q <= 1 || p == q || p * q != n_) {
    Fail(ErrorCode::kInvalidArgument, "Paillier factors do not match n");
  }
  p_ = std::move(p);
  q_ = std::move(q);
  p_squared_ = p_ * p_;
  q_squared_ = q_ * q_;
  // g = n + 1, so g^(p-1) mod p^2 = 1 + (p-1) n mod p^2.
  h_p_ = InvMod(L(PowMod(n_ + 1, p_ - 1, p_squared_), p_), p_);
  h_q_ = InvMod(L(PowMod(n_ + 1, q_ - 1, q_squared_), q_), q_);
  q_inv_p_ = InvMod(q_, p_);
}

BigInt SecretKey::Open(const BigInt& c) const {
  if (!has_factors()) {
    BigInt m = L(PowMod(c, lambda_, n_squared_), n_) * mu_;
    m %= n_;
    return m;
  }
  BigInt m_p = L(PowMod(c % p_squared_, p_ - 1, p_squared_), p_) * h_p_;
  m_p %= p_;
  BigInt m_q = L(PowMod(c % q_squared_, q_ - 1, q_squared_), q_) * h_q_;
  m_q %= q_;
  // m = m_q + q * ((m_p - m_q) q^-1 mod p)
  BigInt t = (m_p - m_q) * q_inv_p_;
  t %= p_;
  if (t < 0) t += p_;
  return m_q + q_ * t;
}

KeyPair KeyPairFromPrimes(const BigInt& p, const BigInt& q) {
  if (p == q) Fail(ErrorCode::kInvalidArgument, "Paillier primes must differ");
  const BigInt n = p * q;
  if (Gcd(n, (p - 1) * (q - 1)) != 1) {
    Fail(ErrorCode::kInvalidArgument, "gcd(n, phi(n)) != 1");
  }
  BigInt lambda;
  const BigInt pm1 = p - 1;
  const BigInt qm1 = q - 1;
  mpz_lcm(lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  PublicKey pk(n);
  const BigInt u = PowMod(pk.g(), lambda, pk.n_squared());
  BigInt mu = InvMod(L(u, n), n);
  return {pk, SecretKey(lambda, mu, n, p, q)};
}

KeyPair GenerateKeyPair(std::size_t prime_bits, RandomSource& rng,
                        bool allow_small) {
  if (prime_bits < 256 && !allow_small) {
    Fail(ErrorCode::kInvalidArgument, "prime_bits must be >= 256");
  }
  for (;;) {
    BigInt p = RandomPrime(rng, prime_bits);
    BigInt q = RandomPrime(rng, prime_bits);
    if (p == q) continue;
    const BigInt n = p * q;
    if (BitLength(n) != 2 * prime_bits) continue;
    if (Gcd(n, (p - 1) * (q - 1)) != 1) continue;
    return KeyPairFromPrimes(p, q);
  }
}

Ciphertext EncryptWithRandomizer(const PublicKey& pk, const BigInt& m,
                                 const BigInt& r) {
  if (m < 0 || m >= pk.n()) {
    Fail(ErrorCode::kOutOfRange, "plaintext outside [0, n)");
  }
  if (r <= 0 || r >= pk.n() || Gcd(r, pk.n()) != 1) {
    Fail(ErrorCode::kInvalidRandomizer, "randomizer must be a unit mod n");
  }
  // g^m = 1 + m*n (mod n^2) for g = n + 1.
  BigInt gm = m * pk.n() + 1;
  BigInt rn = PowMod(r, pk.n(), pk.n_squared());
  BigInt c = gm * rn;
  c %= pk.n_squared();
  return {c, pk.id()};
}

Ciphertext Encrypt(const PublicKey& pk, const BigInt& m, RandomSource& rng) {
  return EncryptWithRandomizer(pk, m, RandomUnit(rng, pk.n()));
}

Ciphertext Encrypt(const PublicKey& pk, const SignedResidue& m,
                   RandomSource& rng) {
  if (m.modulus != pk.n()) {
    Fail(ErrorCode::kKeyMismatch, "residue lives under a different modulus");
  }
  return Encrypt(pk, m.value, rng);
}

BigInt Decrypt(const SecretKey& sk, const Ciphertext& c) {
  if (c.value <= 0 || c.value >= sk.n_squared() || Gcd(c.value, sk.n()) != 1) {
    Fail(ErrorCode::kMalformedCiphertext, "ciphertext is not a unit mod n^2");
  }
  return sk.Open(c.value);
}

Ciphertext HomAdd(const PublicKey& pk, const Ciphertext& a,
                  const Ciphertext& b) {
  CheckKey(pk, a);
  CheckKey(pk, b);
  BigInt c = a.value * b.value;
  c %= pk.n_squared();
  return {c, pk.id()};
}

Ciphertext HomScale(const PublicKey& pk, const Ciphertext& c, const BigInt& k) {
  CheckKey(pk, c);
  if (k < 0 || k >= pk.n()) Fail(ErrorCode::kOutOfRange, "scalar outside [0, n)");
  return {PowMod(c.value, k, pk.n_squared()), pk.id()};
}

Ciphertext HomConstMinus(const PublicKey& pk, const BigInt& k,
                         const Ciphertext& c) {
  CheckKey(pk, c);
  if (k < 0 || k >= pk.n()) Fail(ErrorCode::kOutOfRange, "constant outside [0, n)");
  BigInt out = InvMod(c.value, pk.n_squared()) * (k * pk.n() + 1);
  out %= pk.n_squared();
  return {out, pk.id()};
}

Bytes SerializeCiphertext(const PublicKey& pk, const Ciphertext& c) {
  CheckKey(pk, c);
  return ToBytes(c.value, pk.ciphertext_bytes());
}

Ciphertext ParseCiphertext(const PublicKey& pk, ByteSpan data) {
  if (data.size() != pk.ciphertext_bytes()) {
    Fail(ErrorCode::kMalformedCiphertext,
         "ciphertext must be " + std::to_string(pk.ciphertext_bytes()) +
             " bytes, got " + std::to_string(data.size()));
  }
  BigInt v = FromBytes(data);
  if (v <= 0 || v >= pk.n_squared() || Gcd(v, pk.n()) != 1) {
    Fail(ErrorCode::kMalformedCiphertext, "ciphertext is not a unit mod n^2");
  }
  return {v, pk.id()};
}

Bytes SerializePublicKey(const PublicKey& pk) {
  ByteWriter w;
  w.Blob(ToBytes(pk.n()));
  return w.Take();
}

PublicKey ParsePublicKey(ByteSpan data) {
  ByteReader r(data);
  BigInt n = FromBytes(r.Blob());
  r.ExpectDone();
  if (n <= 2 || n % 2 == 0) Fail(ErrorCode::kParseError, "invalid Paillier modulus");
  return PublicKey(n);
}

Bytes SerializeSecretKey(const SecretKey& sk) {
  ByteWriter w;
  w.Blob(ToBytes(sk.lambda()));
  w.Blob(ToBytes(sk.mu()));
  w.Blob(ToBytes(sk.n()));
  w.Blob(ToBytes(sk.p()));
  w.Blob(ToBytes(sk.q()));
  return w.Take();
}

SecretKey ParseSecretKey(ByteSpan data) {
  ByteReader r(data);
  BigInt lambda = FromBytes(r.Blob());
  BigInt mu = FromBytes(r.Blob());
  BigInt n = FromBytes(r.Blob());
  BigInt p = FromBytes(r.Blob());
  BigInt q = FromBytes(r.Blob());
  r.ExpectDone();
  if (n <= 2) Fail(ErrorCode::kParseError, "invalid Paillier secret key");
  if (p == 0 && q == 0) return SecretKey(lambda, mu, n);
  if (p <= 1 || q <= 1 || p * q != n) {
    Fail(ErrorCode::kParseError, "Paillier factors do not match n");
  }
  return SecretKey(lambda, mu, n, p, q);
}

}  // namespace photoveil::paillier
