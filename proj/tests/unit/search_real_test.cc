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

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "photoveil/search_real.h"
#include "test_util.h"

namespace photoveil::real {
namespace {

using testing::RandomDescriptor;
using testing::RandomRealVector;

const SearchKeys& Keys(std::size_t dim) {
  static std::map<std::size_t, SearchKeys> cache;
  auto it = cache.find(dim);
  if (it == cache.end()) {
    SeededRandom rng(0x4ea1 + dim);
    it = cache.emplace(dim, GenerateSearchKeys(dim, 256, rng)).first;
  }
  return it->second;
}

// Plaintext pipeline: fixed-point squared distances and the ratio test in
// integers, 4 * d_nn < d_2nn for alpha = 0.5.
int OracleScore(const Descriptor& X, const Descriptor& Y) {
  const FixedPointParams fp;
  int score = 0;
  for (const auto& x : X.vectors()) {
    std::vector<BigInt> d;
    for (const auto& y : Y.vectors()) {
      BigInt s = 0;
      for (std::size_t k = 0; k < x.dim(); ++k) {
        const BigInt e = EncodeFixed(x.values()[k], fp) - EncodeFixed(y.values()[k], fp);
        s += e * e;
      }
      d.push_back(s);
    }
    std::sort(d.begin(), d.end());
    if (d.size() == 1) {
      score += d[0] == 0;
    } else {
      score += (d[0] == 0 && d[1] == 0) || 4 * d[0] < d[1];
    }
  }
  return score;
}

TEST(SearchReal, KeysHaveInvertibleBlinding) {
  const SearchKeys& k = Keys(64);
  ASSERT_EQ(k.dim(), 64u);
  for (const BigInt& r : k.r) {
    EXPECT_EQ(Gcd(r, k.pk.n()), 1);
    EXPECT_EQ(BigInt(r * InvMod(r, k.pk.n()) % k.pk.n()), 1);
  }
  SeededRandom rng(1);
  const SearchKeys other = GenerateSearchKeys(64, 256, rng);
  EXPECT_NE(other.r, k.r);
  const SearchKeys parsed = SearchKeys::Parse(k.Serialize());
  EXPECT_EQ(parsed.pk, k.pk);
  EXPECT_EQ(parsed.r, k.r);
}

TEST(SearchReal, KeysRejectOverflowingModulus) {
  SeededRandom rng(2);
  FixedPointParams huge;
  huge.scale_bits = 60;
  huge.range_bits = 60;
  EXPECT_ERROR_CODE(GenerateSearchKeys(128, 64, rng, huge, true), ErrorCode::kOutOfRange);
}

TEST(SearchReal, OwnerBagDecryptsToOracle) {
  SeededRandom rng(3);
  const SearchKeys& k = Keys(8);
  const FixedPointParams fp;
  std::vector<double> v = RandomRealVector(rng, 8).values();
  v[0] = 0.0;
  const Descriptor X({FeatureVector::Real(v)});
  const SearchBag bag = OwnerEncryptDescriptor(X, k, rng);
  ASSERT_EQ(bag.vectors.size(), 1u);
  EXPECT_EQ(paillier::Decrypt(k.sk, bag.vectors[0].c_sq[0]), 0);
  EXPECT_EQ(paillier::Decrypt(k.sk, bag.vectors[0].c_rx[0]), 0);
  const BigInt& n = k.pk.n();
  for (std::size_t i = 0; i < 8; ++i) {
    const BigInt f = EncodeFixed(v[i], fp);
    EXPECT_EQ(paillier::Decrypt(k.sk, bag.vectors[0].c_sq[i]), BigInt(f * f));
    BigInt neg = -k.r[i] * f;
    neg = ((neg % n) + n) % n;
    EXPECT_EQ(paillier::Decrypt(k.sk, bag.vectors[0].c_rx[i]), neg);
  }
  EXPECT_NE(bag.vectors[0].c_sq[0].value, OwnerEncryptDescriptor(X, k, rng).vectors[0].c_sq[0].value);
}

TEST(SearchReal, QuerierEncoding) {
  SeededRandom rng(4);
  const SearchKeys& k = Keys(8);
  const FixedPointParams fp;
  std::vector<double> v = RandomRealVector(rng, 8).values();
  v[3] = 0.0;
  const QueryEncoding q = QuerierEncode(Descriptor({FeatureVector::Real(v)}), k.pk, k.r, fp, rng);
  const BigInt& n = k.pk.n();
  EXPECT_EQ(q.vectors[0].c1[3], 0);
  for (std::size_t i = 0; i < 8; ++i) {
    const BigInt f = EncodeFixed(v[i], fp);
    EXPECT_EQ(BigInt(k.r[i] * q.vectors[0].c1[i] % n), BigInt(((f % n) + n) % n));
    EXPECT_EQ(paillier::Decrypt(k.sk, q.vectors[0].c2[i]), BigInt(f * f));
  }
  EXPECT_ERROR_CODE(QuerierEncode(Descriptor({FeatureVector::Real(std::vector<double>(8, 99.0))}),
                                  k.pk, k.r, fp, rng),
                    ErrorCode::kOutOfRange);
  EXPECT_ERROR_CODE(QuerierEncode(RandomDescriptor(rng, Variant::kReal, 1, 7), k.pk, k.r, fp, rng),
                    ErrorCode::kDimMismatch);
}

TEST(SearchReal, BlindedCoordinateMonobit) {
  // Fixed y, fresh r: c1 bits look uniform.
  SeededRandom rng(5);
  const SearchKeys& k = Keys(8);
  const Descriptor y({FeatureVector::Real(std::vector<double>(8, 0.3))});
  std::uint64_t ones = 0, total = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<BigInt> r;
    for (int i = 0; i < 8; ++i) r.push_back(RandomUnit(rng, k.pk.n()));
    const QueryEncoding q = QuerierEncode(y, k.pk, r, FixedPointParams{}, rng);
    for (const BigInt& c : q.vectors[0].c1) {
      const Bytes b = ToBytes(c, k.pk.modulus_bytes());
      for (std::size_t j = 1; j < b.size(); ++j) ones += __builtin_popcount(b[j]);
      total += 8 * (b.size() - 1);
    }
  }
  EXPECT_NEAR(static_cast<double>(ones) / total, 0.5, 0.01);
}

TEST(SearchReal, DistanceIsExact) {
  SeededRandom rng(6);
  for (std::size_t dim : {64u, 128u}) {
    const SearchKeys& k = Keys(dim);
    for (int t = 0; t < 10; ++t) {
      const Descriptor X = RandomDescriptor(rng, Variant::kReal, 1, dim);
      const Descriptor Y = RandomDescriptor(rng, Variant::kReal, 1, dim);
      const SearchBag bag = OwnerEncryptDescriptor(X, k, rng);
      const QueryEncoding q = QuerierEncode(Y, k.pk, k.r, k.fixed, rng);
      const paillier::Ciphertext c = CloudDistance(bag.vectors[0], q.vectors[0], k.pk);
      EXPECT_EQ(paillier::Decrypt(k.sk, c), EuclidSqFixed(X[0], Y[0], k.fixed));
      const QueryEncoding same = QuerierEncode(X, k.pk, k.r, k.fixed, rng);
      EXPECT_EQ(paillier::Decrypt(k.sk, CloudDistance(bag.vectors[0], same.vectors[0], k.pk)), 0);
    }
  }
}

TEST(SearchReal, DistanceExtremes) {
  SeededRandom rng(7);
  const SearchKeys& k = Keys(64);
  const FixedPointParams fp;
  const double m = std::nextafter(fp.MaxMagnitude(), 0.0);
  const Descriptor X({FeatureVector::Real(std::vector<double>(64, m))});
  const Descriptor Y({FeatureVector::Real(std::vector<double>(64, -m))});
  const SearchBag bag = OwnerEncryptDescriptor(X, k, rng);
  const QueryEncoding q = QuerierEncode(Y, k.pk, k.r, fp, rng);
  EXPECT_EQ(paillier::Decrypt(k.sk, CloudDistance(bag.vectors[0], q.vectors[0], k.pk)),
            EuclidSqFixed(X[0], Y[0], fp));
}

TEST(SearchReal, FinalizeMatchesPlaintextPipeline) {
  SeededRandom rng(8);
  const SearchKeys& k = Keys(16);
  std::vector<EncryptedDistanceMatrix> mats;
  std::vector<int> expected;
  const Descriptor Y = RandomDescriptor(rng, Variant::kReal, 5, 16);
  for (std::size_t img = 0; img < 6; ++img) {
    std::vector<FeatureVector> xs;
    for (int i = 0; i < 6; ++i) {
      if (rng.Coin()) {
        std::vector<double> v = Y[rng.UniformU64(5)].values();
        for (double& e : v) e += testing::UniformReal(rng, -0.02, 0.02);
        xs.push_back(FeatureVector::Real(v));
      } else {
        xs.push_back(RandomRealVector(rng, 16));
      }
    }
    const Descriptor X(xs);
    const SearchBag bag = OwnerEncryptDescriptor(X, k, rng);
    const QueryEncoding q = QuerierEncode(Y, k.pk, k.r, k.fixed, rng);
    mats.push_back(CloudDistanceMatrix(bag, q, img));
    expected.push_back(OracleScore(X, Y));
  }
  EXPECT_EQ(QuerierFinalize(mats, k.sk, {0.5}), expected);
  EXPECT_GT(*std::max_element(expected.begin(), expected.end()), 0);
}

TEST(SearchReal, SelfQueryScoresFull) {
  SeededRandom rng(9);
  const SearchKeys& k = Keys(64);
  const Descriptor X = RandomDescriptor(rng, Variant::kReal, 9, 64);
  const auto m = CloudDistanceMatrix(OwnerEncryptDescriptor(X, k, rng),
                                     QuerierEncode(X, k.pk, k.r, k.fixed, rng));
  EXPECT_EQ(ScoreMatrix(m, k.sk, {0.5}), 9);
}

TEST(SearchReal, NegativeDistanceIsProtocolViolation) {
  SeededRandom rng(10);
  const SearchKeys& k = Keys(8);
  EncryptedDistanceMatrix m;
  m.rows = m.cols = 1;
  m.entries.push_back(paillier::Encrypt(k.pk, BigInt(k.pk.n() - 1), rng));
  EXPECT_ERROR_CODE(DecryptDistances(m, k.sk), ErrorCode::kProtocolViolation);
}

TEST(SearchReal, Mismatches) {
  SeededRandom rng(11);
  const SearchKeys& k8 = Keys(8);
  const SearchKeys& k16 = Keys(16);
  const SearchBag bag = OwnerEncryptDescriptor(RandomDescriptor(rng, Variant::kReal, 2, 8), k8, rng);
  const QueryEncoding q16 = QuerierEncode(RandomDescriptor(rng, Variant::kReal, 2, 16), k16.pk,
                                          k16.r, k16.fixed, rng);
  EXPECT_ERROR_CODE(CloudDistanceMatrix(bag, q16), ErrorCode::kDimMismatch);
  const QueryEncoding q8 =
      QuerierEncode(RandomDescriptor(rng, Variant::kReal, 2, 8), k16.pk,
                    std::span<const BigInt>(k16.r).first(8), k16.fixed, rng);
  EXPECT_ERROR_CODE(CloudDistanceMatrix(bag, q8), ErrorCode::kKeyMismatch);
  EXPECT_ERROR_CODE(OwnerEncryptDescriptor(RandomDescriptor(rng, Variant::kBinary, 1, 8), k8, rng),
                    ErrorCode::kVariantMismatch);
}

TEST(SearchReal, Serialization) {
  SeededRandom rng(12);
  const SearchKeys& k = Keys(8);
  const SearchBag bag = OwnerEncryptDescriptor(RandomDescriptor(rng, Variant::kReal, 3, 8), k, rng);
  const Bytes raw = bag.Serialize();
  EXPECT_EQ(raw.size(), 1 + 4 + k.pk.modulus_bytes() + 12 + 3 * 2 * 8 * k.pk.ciphertext_bytes());
  const SearchBag back = SearchBag::Parse(raw);
  EXPECT_EQ(back.Serialize(), raw);
  EXPECT_ERROR_CODE(SearchBag::Parse(ByteSpan(raw).first(raw.size() - 1)), ErrorCode::kParseError);
  const QueryEncoding q = QuerierEncode(RandomDescriptor(rng, Variant::kReal, 2, 8), k.pk, k.r, k.fixed, rng);
  const Bytes qraw = q.Serialize(k.pk);
  EXPECT_EQ(QueryEncoding::Parse(k.pk, qraw).Serialize(k.pk), qraw);
  const auto m = CloudDistanceMatrix(back, q, 4);
  const auto m2 = EncryptedDistanceMatrix::Parse(k.pk, 4, 3, 2, m.Serialize(k.pk));
  EXPECT_EQ(m2.entries, m.entries);
}

}  // namespace
}  // namespace photoveil::real
