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

#include "photoveil/bigint.h"

#include <algorithm>
#include <vector>

#include "photoveil/error.h"

namespace photoveil {

std::size_t BitLength(const BigInt& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::size_t ByteLength(const BigInt& v) { return (BitLength(v) + 7) / 8; }

Bytes ToBytes(const BigInt& v, std::size_t width) {
  if (v < 0) Fail(ErrorCode::kOutOfRange, "cannot encode a negative integer");
  const std::size_t len = ByteLength(v);
  if (width != 0 && len > width) {
    Fail(ErrorCode::kOutOfRange, "integer does not fit in " +
                                     std::to_string(width) + " bytes");
  }
  const std::size_t total = width == 0 ? len : width;
  Bytes out(total, 0);
  if (len > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + (total - len), &written, 1, 1, 1, 0,
               v.get_mpz_t());
  }
  return out;
}

BigInt FromBytes(ByteSpan data) {
  BigInt v;
  if (!data.empty()) {
    mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  }
  return v;
}

BigInt RandomBits(RandomSource& rng, std::size_t bits) {
  Bytes buf = rng.RandomBytes((bits + 7) / 8);
  if (bits % 8 != 0 && !buf.empty()) {
    buf[0] &= static_cast<std::uint8_t>((1u << (bits % 8)) - 1);
  }
  return FromBytes(buf);
}

BigInt RandomBelow(RandomSource& rng, const BigInt& bound) {
  if (bound <= 0) Fail(ErrorCode::kInvalidArgument, "RandomBelow bound <= 0");
  const std::size_t bits = BitLength(bound);
  for (;;) {
    BigInt v = RandomBits(rng, bits);
    if (v < bound) return v;
  }
}

BigInt RandomUnit(RandomSource& rng, const BigInt& n) {
  for (;;) {
    BigInt v = RandomBelow(rng, n);
    if (v != 0 && Gcd(v, n) == 1) return v;
  }
}

BigInt RandomPrime(RandomSource& rng, std::size_t bits) {
  if (bits < 16) Fail(ErrorCode::kInvalidArgument, "prime too small");
  for (;;) {
    BigInt c = RandomBits(rng, bits);
    mpz_setbit(c.get_mpz_t(), bits - 1);
    mpz_setbit(c.get_mpz_t(), bits - 2);
    mpz_setbit(c.get_mpz_t(), 0);
    if (mpz_probab_prime_p(c.get_mpz_t(), 40) != 0) return c;
  }
}

BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

BigInt InvMod(const BigInt& a, const BigInt& mod) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0) {
    Fail(ErrorCode::kOutOfRange, "value is not invertible");
  }
  return r;
}

BigInt Gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

namespace {

inline void MulMod(mpz_t r, const mpz_t a, const mpz_t b, const mpz_t m) {
  mpz_mul(r, a, b);
  mpz_tdiv_r(r, r, m);
}

}  // namespace

BigInt MultiPowMod(std::span<const BigInt> bases, std::span<const BigInt> exps,
                   const BigInt& mod) {
  if (bases.size() != exps.size()) {
    Fail(ErrorCode::kDimMismatch, "MultiPowMod: bases/exponents length differ");
  }
  std::size_t max_bits = 0;
  for (const BigInt& e : exps) max_bits = std::max(max_bits, BitLength(e));
  return MultiPowTable(bases, mod, max_bits > 256 ? 5 : 4).Pow(exps);
}

MultiPowTable::MultiPowTable(std::span<const BigInt> bases, const BigInt& mod,
                             std::size_t window)
    : bases_(bases.size()), window_(window), mod_(mod) {
  if (window_ < 1 || window_ > 8) {
    Fail(ErrorCode::kInvalidArgument, "MultiPowTable: window must be 1..8");
  }
  const std::size_t table_size = std::size_t{1} << window_;
  table_.resize(bases_ * table_size);
  for (std::size_t i = 0; i < bases_; ++i) {
    BigInt* row = &table_[i * table_size];
    row[1] = bases[i] % mod_;
    if (row[1] < 0) row[1] += mod_;
    for (std::size_t d = 2; d < table_size; ++d) {
      MulMod(row[d].get_mpz_t(), row[d - 1].get_mpz_t(), row[1].get_mpz_t(),
             mod_.get_mpz_t());
    }
  }
}

std::size_t MultiPowTable::BestWindow(std::size_t exp_bits, std::size_t uses) {
  uses = std::max<std::size_t>(uses, 1);
  std::size_t best = 1;
  double best_cost = 0;
  for (std::size_t w = 1; w <= 8; ++w) {
    // Per base: one multiply per window plus the amortized table.
    const double cost = static_cast<double>((exp_bits + w - 1) / w) +
                        static_cast<double>((std::size_t{1} << w) - 2) / uses;
    if (w == 1 || cost < best_cost) {
      best = w;
      best_cost = cost;
    }
  }
  return best;
}

BigInt MultiPowTable::Pow(std::span<const BigInt> exps) const {
  if (exps.size() != bases_) {
    Fail(ErrorCode::kDimMismatch, "MultiPowMod: bases/exponents length differ");
  }
  std::size_t max_bits = 0;
  for (const BigInt& e : exps) {
    if (e < 0) Fail(ErrorCode::kOutOfRange, "MultiPowMod: negative exponent");
    max_bits = std::max(max_bits, BitLength(e));
  }
  BigInt acc = 1;
  if (max_bits == 0) return acc % mod_;

  const std::size_t table_size = std::size_t{1} << window_;
  const std::size_t windows = (max_bits + window_ - 1) / window_;
  bool started = false;
  for (std::size_t w = windows; w-- > 0;) {
    if (started) {
      for (std::size_t s = 0; s < window_; ++s) {
        MulMod(acc.get_mpz_t(), acc.get_mpz_t(), acc.get_mpz_t(),
               mod_.get_mpz_t());
      }
    }
    for (std::size_t i = 0; i < exps.size(); ++i) {
      std::size_t digit = 0;
      for (std::size_t b = window_; b-- > 0;) {
        digit = digit << 1 |
                static_cast<std::size_t>(
                    mpz_tstbit(exps[i].get_mpz_t(), w * window_ + b));
      }
      if (digit == 0) continue;
      MulMod(acc.get_mpz_t(), acc.get_mpz_t(),
             table_[i * table_size + digit].get_mpz_t(), mod_.get_mpz_t());
      started = true;
    }
  }
  return acc;
}

}  // namespace photoveil
