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

#include "photoveil/search_real.h"

#include "photoveil/error.h"

namespace photoveil::real {

namespace {

constexpr std::uint8_t kRealTag = 0;

void CheckQueryShape(const BagVector& x, const QueryVector& y) {
  if (x.c_sq.size() != x.c_rx.size() || y.c1.size() != y.c2.size() ||
      x.c_sq.size() != y.c1.size()) {
    Fail(ErrorCode::kDimMismatch, "bag vector and query vector dimensions differ");
  }
}

}  // namespace

Bytes SearchKeys::Serialize() const {
  ByteWriter w;
  w.Blob(paillier::SerializePublicKey(pk));
  w.Blob(paillier::SerializeSecretKey(sk));
  w.U32(static_cast<std::uint32_t>(fixed.scale_bits));
  w.U32(static_cast<std::uint32_t>(fixed.range_bits));
  w.U32(static_cast<std::uint32_t>(r.size()));
  for (const BigInt& v : r) w.Raw(ToBytes(v, pk.modulus_bytes()));
  return w.Take();
}

SearchKeys SearchKeys::Parse(ByteSpan data) {
  ByteReader rd(data);
  SearchKeys keys;
  keys.pk = paillier::ParsePublicKey(rd.Blob());
  keys.sk = paillier::ParseSecretKey(rd.Blob());
  keys.fixed.scale_bits = static_cast<int>(rd.U32());
  keys.fixed.range_bits = static_cast<int>(rd.U32());
  keys.fixed.Validate();
  const std::uint32_t dim = rd.U32();
  for (std::uint32_t k = 0; k < dim; ++k) {
    keys.r.push_back(FromBytes(rd.Raw(keys.pk.modulus_bytes())));
  }
  rd.ExpectDone();
  if (keys.sk.n() != keys.pk.n()) {
    Fail(ErrorCode::kKeyMismatch, "search keys: secret and public key differ");
  }
  return keys;
}

SearchKeys GenerateSearchKeys(std::size_t dim, std::size_t prime_bits,
                              RandomSource& rng, FixedPointParams fixed,
                              bool allow_small_primes) {
  if (dim == 0) Fail(ErrorCode::kInvalidArgument, "dim must be >= 1");
  fixed.Validate();
  paillier::KeyPair kp = paillier::GenerateKeyPair(prime_bits, rng, allow_small_primes);
  if (!DistanceFitsModulus(fixed, dim, kp.pk.n())) {
    Fail(ErrorCode::kOutOfRange,
         "modulus too small for squared distances at this dim/range");
  }
  SearchKeys keys{kp.pk, kp.sk, {}, fixed};
  keys.r.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) keys.r.push_back(RandomUnit(rng, kp.pk.n()));
  return keys;
}

SearchBag OwnerEncryptDescriptor(const Descriptor& x, const SearchKeys& keys,
                                 RandomSource& rng) {
  if (x.variant() != Variant::kReal) {
    Fail(ErrorCode::kVariantMismatch, "real search bag needs a real descriptor");
  }
  if (x.dim() != keys.dim()) {
    Fail(ErrorCode::kDimMismatch, "descriptor dim " + std::to_string(x.dim()) +
                                      " != key dim " + std::to_string(keys.dim()));
  }
  const BigInt& n = keys.pk.n();
  SearchBag bag{keys.pk, x.dim(), {}};
  bag.vectors.reserve(x.size());
  for (const FeatureVector& v : x.vectors()) {
    BagVector out;
    out.c_sq.reserve(v.dim());
    out.c_rx.reserve(v.dim());
    for (std::size_t k = 0; k < v.dim(); ++k) {
      const BigInt f(static_cast<long>(EncodeFixed(v.values()[k], keys.fixed)));
      out.c_sq.push_back(paillier::Encrypt(keys.pk, BigInt(f * f), rng));
      BigInt neg_rx = -(keys.r[k] * f);
      neg_rx %= n;
      if (neg_rx < 0) neg_rx += n;
      out.c_rx.push_back(paillier::Encrypt(keys.pk, neg_rx, rng));
    }
    bag.vectors.push_back(std::move(out));
  }
  return bag;
}

QueryEncoding QuerierEncode(const Descriptor& y, const paillier::PublicKey& pk,
                            std::span<const BigInt> r,
                            const FixedPointParams& fixed, RandomSource& rng) {
  if (y.variant() != Variant::kReal) {
    Fail(ErrorCode::kVariantMismatch, "real query needs a real descriptor");
  }
  if (y.dim() != r.size()) {
    Fail(ErrorCode::kDimMismatch, "query dim does not match blinding vector");
  }
  const BigInt& n = pk.n();
  std::vector<BigInt> r_inv;
  r_inv.reserve(r.size());
  for (const BigInt& rk : r) r_inv.push_back(InvMod(rk, n));

  QueryEncoding enc{y.dim(), {}};
  enc.vectors.reserve(y.size());
  for (const FeatureVector& v : y.vectors()) {
    QueryVector q;
    q.c1.reserve(v.dim());
    q.c2.reserve(v.dim());
    for (std::size_t k = 0; k < v.dim(); ++k) {
      const BigInt f(static_cast<long>(EncodeFixed(v.values()[k], fixed)));
      BigInt c1 = r_inv[k] * f;
      c1 %= n;
      if (c1 < 0) c1 += n;
      q.c1.push_back(std::move(c1));
      q.c2.push_back(paillier::Encrypt(pk, BigInt(f * f), rng));
    }
    enc.vectors.push_back(std::move(q));
  }
  return enc;
}

namespace {

std::vector<BigInt> BlindedBases(const BagVector& x) {
  std::vector<BigInt> bases;
  bases.reserve(x.c_rx.size());
  for (const auto& c : x.c_rx) bases.push_back(c.value);
  return bases;
}

// `table` holds the c_rx bases of x.
paillier::Ciphertext PairDistance(const BagVector& x, const QueryVector& y,
                                  const paillier::PublicKey& pk,
                                  const MultiPowTable& table) {
  CheckQueryShape(x, y);
  const BigInt& n2 = pk.n_squared();
  std::vector<BigInt> exps;
  exps.reserve(x.c_rx.size());
  BigInt acc = 1;
  for (std::size_t k = 0; k < x.c_rx.size(); ++k) {
    if (x.c_rx[k].key_id != pk.id() || x.c_sq[k].key_id != pk.id() ||
        y.c2[k].key_id != pk.id()) {
      Fail(ErrorCode::kKeyMismatch, "ciphertext from a different key");
    }
    if (y.c1[k] < 0 || y.c1[k] >= pk.n()) {
      Fail(ErrorCode::kOutOfRange, "query residue outside [0, n)");
    }
    // E(-r x)^(2 r^-1 y) = E(-2 x y)
    BigInt e = 2 * y.c1[k];
    if (e >= pk.n()) e -= pk.n();
    exps.push_back(std::move(e));
    acc *= x.c_sq[k].value;
    acc %= n2;
    acc *= y.c2[k].value;
    acc %= n2;
  }
  acc *= table.Pow(exps);
  acc %= n2;
  return {acc, pk.id()};
}

}  // namespace

paillier::Ciphertext CloudDistance(const BagVector& x, const QueryVector& y,
                                   const paillier::PublicKey& pk) {
  CheckQueryShape(x, y);
  const MultiPowTable table(BlindedBases(x), pk.n_squared(),
                            MultiPowTable::BestWindow(BitLength(pk.n()), 1));
  return PairDistance(x, y, pk, table);
}

EncryptedDistanceMatrix CloudDistanceMatrix(const SearchBag& bag,
                                            const QueryEncoding& query,
                                            std::size_t image_index) {
  if (bag.dim != query.dim) {
    Fail(ErrorCode::kDimMismatch, "bag dim " + std::to_string(bag.dim) +
                                      " != query dim " + std::to_string(query.dim));
  }
  EncryptedDistanceMatrix m{image_index, bag.vectors.size(), query.vectors.size(), {}};
  m.entries.reserve(m.rows * m.cols);
  const std::size_t window = MultiPowTable::BestWindow(BitLength(bag.pk.n()), m.cols);
  for (const BagVector& x : bag.vectors) {
    // One table per stored vector, shared by every query vector.
    const MultiPowTable table(BlindedBases(x), bag.pk.n_squared(), window);
    for (const QueryVector& y : query.vectors) {
      m.entries.push_back(PairDistance(x, y, bag.pk, table));
    }
  }
  return m;
}

Bytes SearchBag::Serialize() const {
  ByteWriter w;
  w.U8(kRealTag);
  w.Blob(ToBytes(pk.n()));
  w.U32(static_cast<std::uint32_t>(vectors.size()));
  w.U32(static_cast<std::uint32_t>(dim));
  w.U32(static_cast<std::uint32_t>(pk.ciphertext_bytes()));
  for (const BagVector& v : vectors) {
    for (const auto& c : v.c_sq) w.Raw(paillier::SerializeCiphertext(pk, c));
    for (const auto& c : v.c_rx) w.Raw(paillier::SerializeCiphertext(pk, c));
  }
  return w.Take();
}

SearchBag SearchBag::Parse(ByteSpan data) {
  ByteReader rd(data);
  if (rd.U8() != kRealTag) Fail(ErrorCode::kVariantMismatch, "not a real search bag");
  SearchBag bag;
  BigInt n = FromBytes(rd.Blob());
  if (n <= 2) Fail(ErrorCode::kParseError, "search bag: invalid modulus");
  bag.pk = paillier::PublicKey(n);
  const std::uint32_t count = rd.U32();
  bag.dim = rd.U32();
  const std::uint32_t width = rd.U32();
  if (width != bag.pk.ciphertext_bytes() || count == 0 || bag.dim == 0) {
    Fail(ErrorCode::kParseError, "search bag: inconsistent header");
  }
  bag.vectors.resize(count);
  for (BagVector& v : bag.vectors) {
    for (std::size_t k = 0; k < bag.dim; ++k) {
      v.c_sq.push_back(paillier::ParseCiphertext(bag.pk, rd.Raw(width)));
    }
    for (std::size_t k = 0; k < bag.dim; ++k) {
      v.c_rx.push_back(paillier::ParseCiphertext(bag.pk, rd.Raw(width)));
    }
  }
  rd.ExpectDone();
  return bag;
}

Bytes QueryEncoding::Serialize(const paillier::PublicKey& pk) const {
  ByteWriter w;
  w.U8(kRealTag);
  w.U32(static_cast<std::uint32_t>(vectors.size()));
  w.U32(static_cast<std::uint32_t>(dim));
  for (const QueryVector& v : vectors) {
    for (const BigInt& c : v.c1) w.Raw(ToBytes(c, pk.modulus_bytes()));
    for (const auto& c : v.c2) w.Raw(paillier::SerializeCiphertext(pk, c));
  }
  return w.Take();
}

QueryEncoding QueryEncoding::Parse(const paillier::PublicKey& pk, ByteSpan data) {
  ByteReader rd(data);
  if (rd.U8() != kRealTag) Fail(ErrorCode::kVariantMismatch, "not a real query");
  QueryEncoding enc;
  const std::uint32_t count = rd.U32();
  enc.dim = rd.U32();
  if (count == 0 || enc.dim == 0) Fail(ErrorCode::kParseError, "empty query encoding");
  enc.vectors.resize(count);
  for (QueryVector& v : enc.vectors) {
    for (std::size_t k = 0; k < enc.dim; ++k) {
      BigInt c1 = FromBytes(rd.Raw(pk.modulus_bytes()));
      if (c1 >= pk.n()) Fail(ErrorCode::kParseError, "query residue >= n");
      v.c1.push_back(std::move(c1));
    }
    for (std::size_t k = 0; k < enc.dim; ++k) {
      v.c2.push_back(paillier::ParseCiphertext(pk, rd.Raw(pk.ciphertext_bytes())));
    }
  }
  rd.ExpectDone();
  return enc;
}

}  // namespace photoveil::real
