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

#include "photoveil/search_bin.h"

#include "photoveil/error.h"

namespace photoveil::bin {

namespace {

constexpr std::uint8_t kBinTag = 1;

Digest Iterate(const Seed& s, std::size_t k) {
  Digest d = Sha256(s);
  for (std::size_t i = 1; i < k; ++i) d = Sha256(d);
  return d;
}

WireKey KeyFromChain(const Digest& chain, const WireKey& label) {
  const Digest d = Sha256({chain, label});
  WireKey out;
  std::copy_n(d.begin(), out.size(), out.begin());
  return out;
}

// The gate position binds each payload to its slot.
std::array<std::uint8_t, 4> PositionAad(std::size_t k) {
  return {static_cast<std::uint8_t>(k >> 24), static_cast<std::uint8_t>(k >> 16),
          static_cast<std::uint8_t>(k >> 8), static_cast<std::uint8_t>(k)};
}

SymmetricKey AsSymmetric(const WireKey& w) { return w; }

}  // namespace

Bytes SearchKeys::Serialize() const {
  ByteWriter w;
  w.Blob(paillier::SerializePublicKey(pk));
  w.Blob(paillier::SerializeSecretKey(sk));
  w.Raw(k0);
  w.Raw(k1);
  w.Raw(s);
  return w.Take();
}

SearchKeys SearchKeys::Parse(ByteSpan data) {
  ByteReader rd(data);
  SearchKeys keys;
  keys.pk = paillier::ParsePublicKey(rd.Blob());
  keys.sk = paillier::ParseSecretKey(rd.Blob());
  ByteSpan k0 = rd.Raw(16);
  ByteSpan k1 = rd.Raw(16);
  ByteSpan s = rd.Raw(32);
  rd.ExpectDone();
  std::copy(k0.begin(), k0.end(), keys.k0.begin());
  std::copy(k1.begin(), k1.end(), keys.k1.begin());
  std::copy(s.begin(), s.end(), keys.s.begin());
  if (keys.sk.n() != keys.pk.n()) {
    Fail(ErrorCode::kKeyMismatch, "search keys: secret and public key differ");
  }
  return keys;
}

SearchKeys GenerateSearchKeys(std::size_t prime_bits, RandomSource& rng,
                              bool allow_small_primes) {
  paillier::KeyPair kp = paillier::GenerateKeyPair(prime_bits, rng, allow_small_primes);
  SearchKeys keys{kp.pk, kp.sk, {}, {}, {}};
  do {
    rng.Fill(keys.k0);
    rng.Fill(keys.k1);
  } while (keys.k0 == keys.k1);
  rng.Fill(keys.s);
  return keys;
}

WireKey DeriveWireKey(const Seed& s, std::size_t k, const WireKey& label) {
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "bit positions start at 1");
  return KeyFromChain(Iterate(s, k), label);
}

WireKey DeriveWireKey(const SearchKeys& keys, std::size_t k, int bit) {
  return DeriveWireKey(keys.s, k, bit ? keys.k1 : keys.k0);
}

WireKeyChain::WireKeyChain(const SearchKeys& keys, std::size_t dim)
    : k0_(keys.k0), k1_(keys.k1) {
  chain_.reserve(dim);
  if (dim == 0) return;
  chain_.push_back(Sha256(keys.s));
  for (std::size_t k = 1; k < dim; ++k) chain_.push_back(Sha256(chain_.back()));
}

WireKey WireKeyChain::Key(std::size_t k, int bit) const {
  if (k < 1 || k > chain_.size()) {
    Fail(ErrorCode::kOutOfRange, "bit position outside the chain");
  }
  return KeyFromChain(chain_[k - 1], bit ? k1_ : k0_);
}

RowTag TagForKey(const WireKey& key) {
  static constexpr std::uint8_t kDomain[] = {0x01};
  const Digest d = Sha256({key, kDomain});
  RowTag tag;
  std::copy_n(d.begin(), tag.size(), tag.begin());
  return tag;
}

GarbledVector GarbleVector(const FeatureVector& x, const SearchKeys& keys,
                           RandomSource& rng, GateRandomness mode) {
  const auto& bits = x.bits();
  const WireKeyChain chain(keys, bits.size());
  const paillier::PublicKey& pk = keys.pk;
  GarbledVector gates;
  gates.reserve(bits.size());
  for (std::size_t k = 1; k <= bits.size(); ++k) {
    const int xk = bits[k - 1];
    // row_plain[b] = x_k XOR b
    std::array<paillier::Ciphertext, 2> payload;
    if (mode == GateRandomness::kComplementary) {
      payload[0] = paillier::Encrypt(pk, BigInt(xk), rng);
      payload[1] = paillier::HomConstMinus(pk, BigInt(1), payload[0]);
    } else {
      payload[0] = paillier::Encrypt(pk, BigInt(xk), rng);
      payload[1] = paillier::Encrypt(pk, BigInt(xk ^ 1), rng);
    }
    const auto aad = PositionAad(k);
    std::array<GateRow, 2> rows;
    for (int b = 0; b < 2; ++b) {
      const WireKey gamma = chain.Key(k, b);
      rows[b].tag = TagForKey(gamma);
      rows[b].payload = AeadSeal(AsSymmetric(gamma),
                                 paillier::SerializeCiphertext(pk, payload[b]),
                                 aad, rng);
    }
    if (rng.Coin()) std::swap(rows[0], rows[1]);
    gates.push_back(GarbledGate{std::move(rows)});
  }
  return gates;
}

SearchBag GarbleDescriptor(const Descriptor& x, const SearchKeys& keys,
                           RandomSource& rng, GateRandomness mode) {
  if (x.variant() != Variant::kBinary) {
    Fail(ErrorCode::kVariantMismatch, "binary search bag needs a binary descriptor");
  }
  SearchBag bag{keys.pk, x.dim(), {}};
  bag.vectors.reserve(x.size());
  for (const FeatureVector& v : x.vectors()) {
    bag.vectors.push_back(GarbleVector(v, keys, rng, mode));
  }
  return bag;
}

GarbledInput EncodeQuery(const FeatureVector& y, const SearchKeys& keys) {
  const auto& bits = y.bits();
  const WireKeyChain chain(keys, bits.size());
  GarbledInput in;
  in.keys.reserve(bits.size());
  for (std::size_t k = 1; k <= bits.size(); ++k) {
    in.keys.push_back(chain.Key(k, bits[k - 1]));
  }
  return in;
}

QueryEncoding EncodeQueryDescriptor(const Descriptor& y, const SearchKeys& keys) {
  if (y.variant() != Variant::kBinary) {
    Fail(ErrorCode::kVariantMismatch, "binary query needs a binary descriptor");
  }
  QueryEncoding enc{y.dim(), {}};
  enc.vectors.reserve(y.size());
  for (const FeatureVector& v : y.vectors()) enc.vectors.push_back(EncodeQuery(v, keys));
  return enc;
}

paillier::Ciphertext CloudEval(const GarbledVector& gates,
                               const GarbledInput& input,
                               const paillier::PublicKey& pk) {
  if (gates.size() != input.keys.size() || gates.empty()) {
    Fail(ErrorCode::kDimMismatch, "garbled vector and input lengths differ");
  }
  BigInt acc = 1;
  for (std::size_t k = 1; k <= gates.size(); ++k) {
    const WireKey& gamma = input.keys[k - 1];
    const RowTag tag = TagForKey(gamma);
    const GarbledGate& gate = gates[k - 1];
    // Both comparisons always run; selection depends on tags only.
    const bool m0 = gate.rows[0].tag == tag;
    const bool m1 = gate.rows[1].tag == tag;
    if (m0 == m1) {
      Fail(ErrorCode::kNoMatchingRow,
           "gate " + std::to_string(k) + ": input key matches no unique row");
    }
    const GateRow& row = gate.rows[m1 ? 1 : 0];
    Bytes plain;
    try {
      plain = AeadOpen(AsSymmetric(gamma), row.payload, PositionAad(k));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIntegrityFailure) throw;
      Fail(ErrorCode::kAuthFailure,
           "gate " + std::to_string(k) + ": payload failed authentication");
    }
    const paillier::Ciphertext c = paillier::ParseCiphertext(pk, plain);
    acc *= c.value;
    acc %= pk.n_squared();
  }
  return {acc, pk.id()};
}

EncryptedDistanceMatrix CloudEvalMatrix(const SearchBag& bag,
                                        const QueryEncoding& query,
                                        std::size_t image_index) {
  if (bag.dim != query.dim) {
    Fail(ErrorCode::kDimMismatch, "bag dim " + std::to_string(bag.dim) +
                                      " != query dim " + std::to_string(query.dim));
  }
  EncryptedDistanceMatrix m{image_index, bag.vectors.size(), query.vectors.size(), {}};
  m.entries.reserve(m.rows * m.cols);
  for (const GarbledVector& x : bag.vectors) {
    for (const GarbledInput& y : query.vectors) {
      m.entries.push_back(CloudEval(x, y, bag.pk));
    }
  }
  return m;
}

Bytes SearchBag::Serialize() const {
  ByteWriter w;
  w.U8(kBinTag);
  w.Blob(ToBytes(pk.n()));
  w.U32(static_cast<std::uint32_t>(vectors.size()));
  for (const GarbledVector& v : vectors) {
    w.U32(static_cast<std::uint32_t>(v.size()));
    for (const GarbledGate& g : v) {
      for (const GateRow& row : g.rows) {
        w.Raw(row.tag);
        w.Blob(row.payload);
      }
    }
  }
  return w.Take();
}

SearchBag SearchBag::Parse(ByteSpan data) {
  ByteReader rd(data);
  if (rd.U8() != kBinTag) Fail(ErrorCode::kVariantMismatch, "not a binary search bag");
  SearchBag bag;
  BigInt n = FromBytes(rd.Blob());
  if (n <= 2) Fail(ErrorCode::kParseError, "search bag: invalid modulus");
  bag.pk = paillier::PublicKey(n);
  const std::uint32_t count = rd.U32();
  if (count == 0) Fail(ErrorCode::kParseError, "search bag: no vectors");
  bag.vectors.resize(count);
  for (GarbledVector& v : bag.vectors) {
    const std::uint32_t gates = rd.U32();
    if (gates == 0 || (bag.dim != 0 && gates != bag.dim)) {
      Fail(ErrorCode::kParseError, "search bag: inconsistent gate count");
    }
    bag.dim = gates;
    v.resize(gates);
    for (GarbledGate& g : v) {
      for (GateRow& row : g.rows) {
        ByteSpan tag = rd.Raw(row.tag.size());
        std::copy(tag.begin(), tag.end(), row.tag.begin());
        ByteSpan payload = rd.Blob();
        row.payload.assign(payload.begin(), payload.end());
      }
    }
  }
  rd.ExpectDone();
  return bag;
}

Bytes QueryEncoding::Serialize() const {
  ByteWriter w;
  w.U8(kBinTag);
  w.U32(static_cast<std::uint32_t>(vectors.size()));
  w.U32(static_cast<std::uint32_t>(dim));
  for (const GarbledInput& v : vectors) {
    for (const WireKey& key : v.keys) w.Raw(key);
  }
  return w.Take();
}

QueryEncoding QueryEncoding::Parse(ByteSpan data) {
  ByteReader rd(data);
  if (rd.U8() != kBinTag) Fail(ErrorCode::kVariantMismatch, "not a binary query");
  QueryEncoding enc;
  const std::uint32_t count = rd.U32();
  enc.dim = rd.U32();
  if (count == 0 || enc.dim == 0) Fail(ErrorCode::kParseError, "empty query encoding");
  enc.vectors.resize(count);
  for (GarbledInput& v : enc.vectors) {
    v.keys.resize(enc.dim);
    for (WireKey& key : v.keys) {
      ByteSpan raw = rd.Raw(key.size());
      std::copy(raw.begin(), raw.end(), key.begin());
    }
  }
  rd.ExpectDone();
  return enc;
}

}  // namespace photoveil::bin
