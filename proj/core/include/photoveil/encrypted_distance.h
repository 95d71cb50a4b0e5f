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

#ifndef PHOTOVEIL_ENCRYPTED_DISTANCE_H_
#define PHOTOVEIL_ENCRYPTED_DISTANCE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "photoveil/descriptor.h"
#include "photoveil/paillier.h"

namespace photoveil {

// Encrypted squared distances between every stored vector (row) and every
// query vector (column) of one image.
struct EncryptedDistanceMatrix {
  std::size_t image_index = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<paillier::Ciphertext> entries;  // row-major

  const paillier::Ciphertext& at(std::size_t i, std::size_t j) const {
    return entries[i * cols + j];
  }

  Bytes Serialize(const paillier::PublicKey& pk) const;
  static EncryptedDistanceMatrix Parse(const paillier::PublicKey& pk,
                                       std::size_t image_index, std::size_t rows,
                                       std::size_t cols, ByteSpan data);
};

// Decrypts every entry and maps it back through FromResidue. Throws
// kProtocolViolation if any distance decodes negative.
std::vector<BigInt> DecryptDistances(const EncryptedDistanceMatrix& m,
                                     const paillier::SecretKey& sk);

// Similarity score for one image: the number of stored vectors whose
// decrypted row passes the ratio test.
int ScoreMatrix(const EncryptedDistanceMatrix& m, const paillier::SecretKey& sk,
                MatchThreshold alpha);

// Scores indexed like `matrices`.
std::vector<int> QuerierFinalize(std::span<const EncryptedDistanceMatrix> matrices,
                                 const paillier::SecretKey& sk,
                                 MatchThreshold alpha);

}  // namespace photoveil

#endif  // PHOTOVEIL_ENCRYPTED_DISTANCE_H_
