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

#include "photoveil/numeric.h"

#include <cmath>
#include <string>

#include "photoveil/error.h"

namespace photoveil {

void FixedPointParams::Validate() const {
  if (scale_bits < 1 || range_bits < scale_bits || range_bits > 62) {
    Fail(ErrorCode::kInvalidArgument,
         "fixed-point params need 1 <= scale_bits <= range_bits <= 62 (got " +
             std::to_string(scale_bits) + ", " + std::to_string(range_bits) +
             ")");
  }
}

double FixedPointParams::MaxMagnitude() const {
  return std::ldexp(1.0, range_bits - scale_bits);
}

double FixedPointParams::DistanceScale() const {
  return std::ldexp(1.0, 2 * scale_bits);
}

std::int64_t EncodeFixed(double a, const FixedPointParams& params) {
  params.Validate();
  if (!std::isfinite(a) || std::fabs(a) >= params.MaxMagnitude()) {
    Fail(ErrorCode::kOutOfRange,
         "value " + std::to_string(a) + " outside fixed-point range (+/-" +
             std::to_string(params.MaxMagnitude()) + ")");
  }
  // Scaling by a power of two is exact; std::llround rounds half away from 0.
  return std::llround(std::ldexp(a, params.scale_bits));
}

double DecodeFixed(std::int64_t t, const FixedPointParams& params) {
  return std::ldexp(static_cast<double>(t), -params.scale_bits);
}

SignedResidue ToResidue(const BigInt& t, const BigInt& n) {
  const BigInt half = n / 2;
  if (abs(t) > half) {
    Fail(ErrorCode::kOutOfRange, "signed value exceeds floor(n/2)");
  }
  BigInt v = t % n;
  if (v < 0) v += n;
  return {v, n};
}

BigInt FromResidue(const BigInt& value, const BigInt& n) {
  if (value > n / 2) return value - n;
  return value;
}

BigInt FromResidue(const SignedResidue& r) {
  return FromResidue(r.value, r.modulus);
}

bool DistanceFitsModulus(const FixedPointParams& params, std::size_t dim,
                         const BigInt& n) {
  // Each per-dimension difference is below 2 * 2^range_bits in magnitude.
  BigInt diff = BigInt(1) << (params.range_bits + 1);
  BigInt bound = diff * diff * static_cast<unsigned long>(dim);
  return bound < n / 2;
}

}  // namespace photoveil
