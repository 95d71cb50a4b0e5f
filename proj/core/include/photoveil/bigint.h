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

#ifndef PHOTOVEIL_BIGINT_H_
#define PHOTOVEIL_BIGINT_H_

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <vector>

#include "photoveil/bytes.h"
#include "photoveil/random.h"

namespace photoveil {

using BigInt = mpz_class;

// Minimal big-endian byte length of a nonnegative value (0 -> 0 bytes).
std::size_t ByteLength(const BigInt& v);
std::size_t BitLength(const BigInt& v);

// Big-endian encoding, left-padded with zeros to `width` bytes when width > 0.
// Throws kOutOfRange if the value is negative or does not fit.
Bytes ToBytes(const BigInt& v, std::size_t width = 0);
BigInt FromBytes(ByteSpan data);

// Uniform in [0, 2^bits).
BigInt RandomBits(RandomSource& rng, std::size_t bits);
// Uniform in [0, bound).
BigInt RandomBelow(RandomSource& rng, const BigInt& bound);
// Uniform element of [1, n) with gcd(v, n) == 1.
BigInt RandomUnit(RandomSource& rng, const BigInt& n);
// Random prime of exactly `bits` bits with the top two bits set, so the
// product of two such primes has exactly 2*bits bits.
BigInt RandomPrime(RandomSource& rng, std::size_t bits);

BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& mod);
// Throws kOutOfRange when no inverse exists.
BigInt InvMod(const BigInt& a, const BigInt& mod);
BigInt Gcd(const BigInt& a, const BigInt& b);

// prod_i bases[i]^exps[i] mod `mod`, using interleaved fixed-window
// (Straus) exponentiation so squarings are shared across all bases.
// Exponents must be nonnegative.
BigInt MultiPowMod(std::span<const BigInt> bases, std::span<const BigInt> exps,
                   const BigInt& mod);

// Straus tables for a fixed list of bases, reusable across exponent lists.
class MultiPowTable {
 public:
  // Window of 1..8 bits; bases are reduced mod `mod`.
  MultiPowTable(std::span<const BigInt> bases, const BigInt& mod, std::size_t window);

  // Window minimizing table plus evaluation cost when the table serves
  // `uses` exponent lists of `exp_bits`-bit exponents.
  static std::size_t BestWindow(std::size_t exp_bits, std::size_t uses);

  std::size_t size() const { return bases_; }
  // prod_i bases[i]^exps[i] mod `mod`. Exponents must be nonnegative.
  BigInt Pow(std::span<const BigInt> exps) const;

 private:
  std::size_t bases_;
  std::size_t window_;
  BigInt mod_;
  std::vector<BigInt> table_;  // table_[i * 2^w + d] = bases[i]^d, d in [1, 2^w)
};

}  // namespace photoveil

#endif  // PHOTOVEIL_BIGINT_H_
