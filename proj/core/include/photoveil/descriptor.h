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

#ifndef PHOTOVEIL_DESCRIPTOR_H_
#define PHOTOVEIL_DESCRIPTOR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "photoveil/bigint.h"
#include "photoveil/image.h"
#include "photoveil/numeric.h"

namespace photoveil {

enum class Variant { kReal, kBinary };

std::string_view VariantName(Variant v);
// Accepts "real", "binary" and "bin". Throws kInvalidArgument.
Variant ParseVariant(std::string_view name);

// One interest-point vector, either real-valued or a bit string.
class FeatureVector {
 public:
  FeatureVector() = default;

  static FeatureVector Real(std::vector<double> values);
  // Each entry must be 0 or 1.
  static FeatureVector Binary(std::vector<std::uint8_t> bits);

  Variant variant() const { return variant_; }
  std::size_t dim() const {
    return variant_ == Variant::kReal ? values_.size() : bits_.size();
  }
  const std::vector<double>& values() const;
  const std::vector<std::uint8_t>& bits() const;

  bool operator==(const FeatureVector&) const = default;

 private:
  Variant variant_ = Variant::kReal;
  std::vector<double> values_;
  std::vector<std::uint8_t> bits_;
};

// Non-empty set of same-variant, same-dimension vectors.
class Descriptor {
 public:
  Descriptor() = default;
  // Throws kInvalidArgument for an empty list and kDimMismatch for mixed
  // dimensions or variants.
  explicit Descriptor(std::vector<FeatureVector> vectors);

  Variant variant() const { return vectors_.front().variant(); }
  std::size_t dim() const { return vectors_.front().dim(); }
  std::size_t size() const { return vectors_.size(); }
  const FeatureVector& operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<FeatureVector>& vectors() const { return vectors_; }

  bool operator==(const Descriptor&) const = default;

 private:
  std::vector<FeatureVector> vectors_;
};

struct MatchThreshold {
  double alpha = 0.5;

  // Throws kInvalidArgument unless 0 < alpha < 1.
  void Validate() const;
};

struct MatchResult {
  bool is_match = false;
  std::size_t nn_index = 0;
};

// Squared Euclidean distance of real vectors. Throws kDimMismatch.
double EuclidSq(const FeatureVector& x, const FeatureVector& y);
// Same distance over the fixed-point encodings; exact.
BigInt EuclidSqFixed(const FeatureVector& x, const FeatureVector& y,
                     const FixedPointParams& params);
// Popcount of x XOR y for binary vectors. Throws kDimMismatch.
std::uint64_t Hamming(const FeatureVector& x, const FeatureVector& y);

// Ratio test over the squared distances from one vector to every candidate:
// match iff d_nn^2 < alpha^2 * d_2nn^2. A single candidate matches only at
// distance 0; two zero distances match. Ties pick the lowest index.
// Throws kInvalidArgument on an empty candidate list.
MatchResult RatioTest(std::span<const double> sq_dists, MatchThreshold alpha);
// Exact variant for integer distances (decrypted protocol output).
MatchResult RatioTest(std::span<const BigInt> sq_dists, MatchThreshold alpha);

// Distance is EuclidSq for real vectors and Hamming for binary ones.
MatchResult RatioMatch(const FeatureVector& x, const Descriptor& y,
                       MatchThreshold alpha);

// Number of x in `x_set` that pass the ratio test against `y_set`.
int Similarity(const Descriptor& x_set, const Descriptor& y_set,
               MatchThreshold alpha);

struct ScoredImage {
  std::string image_id;
  int score = 0;

  bool operator==(const ScoredImage&) const = default;
};

// Descending score, ties by ascending image_id. Throws kOutOfRange when
// k > scores.size().
std::vector<ScoredImage> RankTopK(std::vector<ScoredImage> scores,
                                  std::size_t k);

// Dimension of vectors produced by ToyExtract.
inline constexpr std::size_t kToyDim = 64;

// Stand-in feature extractor: one L2-normalised 64-bin intensity histogram
// per grid cell (grid x grid cells). The binary variant thresholds each
// histogram at its median. Throws kImageTooSmall if a cell would be empty.
Descriptor ToyExtract(const GrayImage& img, int grid,
                      Variant variant = Variant::kReal);

// Text format: `variant dim count` header, then one vector per line
// (space-separated decimals, or a contiguous 0/1 string for binary).
std::string FormatDescriptor(const Descriptor& d);
// Throws kParseError with the line number and byte offset.
Descriptor ParseDescriptor(std::string_view text);
Descriptor ReadDescriptor(const std::filesystem::path& path);
void WriteDescriptor(const std::filesystem::path& path, const Descriptor& d);

}  // namespace photoveil

#endif  // PHOTOVEIL_DESCRIPTOR_H_
