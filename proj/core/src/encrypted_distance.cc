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

#include "photoveil/encrypted_distance.h"

#include "photoveil/error.h"

namespace photoveil {

Bytes EncryptedDistanceMatrix::Serialize(const paillier::PublicKey& pk) const {
  ByteWriter w;
  for (const auto& c : entries) w.Raw(paillier::SerializeCiphertext(pk, c));
  return w.Take();
}

EncryptedDistanceMatrix EncryptedDistanceMatrix::Parse(
    const paillier::PublicKey& pk, std::size_t image_index, std::size_t rows,
    std::size_t cols, ByteSpan data) {
  const std::size_t width = pk.ciphertext_bytes();
  if (rows == 0 || cols == 0 || data.size() != rows * cols * width) {
    Fail(ErrorCode::kMalformedCiphertext, "distance matrix has wrong size");
  }
  EncryptedDistanceMatrix m{image_index, rows, cols, {}};
  m.entries.reserve(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    m.entries.push_back(paillier::ParseCiphertext(pk, data.subspan(i * width, width)));
  }
  return m;
}

std::vector<BigInt> DecryptDistances(const EncryptedDistanceMatrix& m,
                                     const paillier::SecretKey& sk) {
  std::vector<BigInt> out;
  out.reserve(m.entries.size());
  for (const auto& c : m.entries) {
    BigInt d = FromResidue(paillier::Decrypt(sk, c), sk.n());
    if (d < 0) {
      Fail(ErrorCode::kProtocolViolation,
           "decrypted distance is negative; squared distances must be >= 0");
    }
    out.push_back(std::move(d));
  }
  return out;
}

int ScoreMatrix(const EncryptedDistanceMatrix& m, const paillier::SecretKey& sk,
                MatchThreshold alpha) {
  const std::vector<BigInt> d = DecryptDistances(m, sk);
  int score = 0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::span<const BigInt> row(d.data() + i * m.cols, m.cols);
    if (RatioTest(row, alpha).is_match) ++score;
  }
  return score;
}

std::vector<int> QuerierFinalize(std::span<const EncryptedDistanceMatrix> matrices,
                                 const paillier::SecretKey& sk,
                                 MatchThreshold alpha) {
  std::vector<int> scores;
  scores.reserve(matrices.size());
  for (const auto& m : matrices) scores.push_back(ScoreMatrix(m, sk, alpha));
  return scores;
}

}  // namespace photoveil
