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

#ifndef PHOTOVEIL_NUMERIC_H_
#define PHOTOVEIL_NUMERIC_H_

#include <cstddef>
#include <cstdint>

#include "photoveil/bigint.h"

namespace photoveil {

// Real a maps to round(a * 2^scale_bits); encoded magnitudes stay below
// 2^range_bits.
struct FixedPointParams {
  int scale_bits = 16;
  int range_bits = 20;

  // Throws kInvalidArgument unless 1 <= scale_bits <= range_bits <= 62.
  void Validate() const;
  // Exclusive bound on |a| accepted by EncodeFixed.
  double MaxMagnitude() const;
  // 2^(2*scale_bits): the factor squared distances carry after decryption.
  double DistanceScale() const;
};

// Round-half-away-from-zero. Throws kOutOfRange for |a| >= 2^(range-scale)
// or non-finite input.
std::int64_t EncodeFixed(double a, const FixedPointParams& params);
double DecodeFixed(std::int64_t t, const FixedPointParams& params);

// A Paillier plaintext interpreted as a signed integer: values above n/2
// stand for value - n.
struct SignedResidue {
  BigInt value;
  BigInt modulus;
};

// Throws kOutOfRange if |t| > floor(n/2).
SignedResidue ToResidue(const BigInt& t, const BigInt& n);
BigInt FromResidue(const SignedResidue& r);
BigInt FromResidue(const BigInt& value, const BigInt& n);

// True when every squared distance of `dim`-dimensional encoded vectors stays
// below n/2, so decryptions never wrap.
bool DistanceFitsModulus(const FixedPointParams& params, std::size_t dim,
                         const BigInt& n);

}  // namespace photoveil

#endif  // PHOTOVEIL_NUMERIC_H_
