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

#ifndef PHOTOVEIL_WORKFLOW_H_
#define PHOTOVEIL_WORKFLOW_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "photoveil/access.h"
#include "photoveil/client.h"
#include "photoveil/descriptor.h"
#include "photoveil/image.h"
#include "photoveil/rop.h"
#include "photoveil/search_bin.h"
#include "photoveil/search_real.h"

// Owner and querier sides of the full lifecycle, on top of CloudClient.
namespace photoveil {

// Search keys of either variant; this is the payload of an owner's envelope.
class OwnerKeys {
 public:
  explicit OwnerKeys(real::SearchKeys keys) : keys_(std::move(keys)) {}
  explicit OwnerKeys(bin::SearchKeys keys) : keys_(std::move(keys)) {}

  Variant variant() const;
  const paillier::PublicKey& pk() const;
  const paillier::SecretKey& sk() const;
  const real::SearchKeys& real() const;
  const bin::SearchKeys& bin() const;

  // u8 variant | blob keys.
  Bytes Serialize() const;
  static OwnerKeys Parse(ByteSpan data);

 private:
  std::variant<real::SearchKeys, bin::SearchKeys> keys_;
};

struct KeygenOptions {
  Variant variant = Variant::kReal;
  std::size_t dim = kToyDim;
  std::size_t prime_bits = 512;
  bool allow_small_primes = false;
  FixedPointParams fixed;
};

OwnerKeys GenerateOwnerKeys(const KeygenOptions& options, RandomSource& rng);

struct UploadOptions {
  SeparationMethod method = SeparationMethod::kBlur;
  int kernel = 0;  // 0 selects DefaultBlurKernel
  int grid = 3;    // ToyExtract grid when no descriptor is given
};

struct PreparedImage {
  std::string image_id;
  Bytes public_bag;
  Bytes private_bag;
  Bytes search_bag;
  Descriptor descriptor;
};

// Separates the ROP, seals the secret part under a fresh K_e wrapped by
// `policy`, and encrypts the descriptor (ToyExtract of the ROP crop unless
// one is supplied).
PreparedImage PrepareImage(const std::string& image_id, const GrayImage& image,
                           const RopRect& rect, const OwnerKeys& keys,
                           const access::PolicyNode& policy,
                           const access::Authority& authority, RandomSource& rng,
                           const UploadOptions& options = {},
                           const Descriptor* descriptor = nullptr);

wire::UploadImage ToUpload(const std::string& owner, const PreparedImage& image);

struct SearchHit {
  std::size_t image_index = 0;
  std::string image_id;
  int score = 0;
};

struct SearchOutcome {
  std::vector<SearchHit> ranked;  // best first, at most k
  std::vector<int> scores;        // per image index
  std::vector<std::string> manifest;
  bool clamped = false;  // k exceeded the number of images
};

struct RetrievedImage {
  std::size_t image_index = 0;
  std::string image_id;
  GrayImage public_image;
  GrayImage image;  // recovered original
};

class Querier {
 public:
  Querier(CloudClient& client, access::CredentialSet credentials, RandomSource& rng);

  // Fetches and unwraps the owner's envelope. Throws kAccessDenied.
  const OwnerKeys& Unlock(const std::string& owner);
  // Image ids in index order, as of the last fetch.
  const std::vector<std::string>& Manifest(const std::string& owner);

  SearchOutcome Search(const std::string& owner, const Descriptor& query, std::size_t k,
                       MatchThreshold alpha = {}, const std::string& session = "q");

  // Obliviously fetches the images at `indices` with a padded superset of
  // size n (clamped to the store size), then recovers them.
  std::vector<RetrievedImage> Retrieve(const std::string& owner,
                                       const std::vector<std::size_t>& indices,
                                       std::size_t n);

 private:
  struct OwnerState {
    OwnerKeys keys;
    std::vector<std::string> manifest;
  };
  OwnerState& State(const std::string& owner);

  CloudClient& client_;
  access::CredentialSet credentials_;
  RandomSource& rng_;
  std::map<std::string, OwnerState> owners_;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_WORKFLOW_H_
