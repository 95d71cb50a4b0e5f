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

#include "photoveil/workflow.h"

#include <algorithm>

#include "photoveil/encrypted_distance.h"
#include "photoveil/error.h"

namespace photoveil {

Variant OwnerKeys::variant() const {
  return std::holds_alternative<real::SearchKeys>(keys_) ? Variant::kReal : Variant::kBinary;
}

const paillier::PublicKey& OwnerKeys::pk() const {
  return variant() == Variant::kReal ? real().pk : bin().pk;
}

const paillier::SecretKey& OwnerKeys::sk() const {
  return variant() == Variant::kReal ? real().sk : bin().sk;
}

const real::SearchKeys& OwnerKeys::real() const {
  if (variant() != Variant::kReal) Fail(ErrorCode::kVariantMismatch, "owner uses binary keys");
  return std::get<real::SearchKeys>(keys_);
}

const bin::SearchKeys& OwnerKeys::bin() const {
  if (variant() != Variant::kBinary) Fail(ErrorCode::kVariantMismatch, "owner uses real keys");
  return std::get<bin::SearchKeys>(keys_);
}

Bytes OwnerKeys::Serialize() const {
  ByteWriter w;
  w.U8(variant() == Variant::kReal ? 0 : 1);
  w.Blob(variant() == Variant::kReal ? real().Serialize() : bin().Serialize());
  return w.Take();
}

OwnerKeys OwnerKeys::Parse(ByteSpan data) {
  ByteReader rd(data);
  const std::uint8_t tag = rd.U8();
  ByteSpan blob = rd.Blob();
  rd.ExpectDone();
  if (tag == 0) return OwnerKeys(real::SearchKeys::Parse(blob));
  if (tag == 1) return OwnerKeys(bin::SearchKeys::Parse(blob));
  Fail(ErrorCode::kParseError, "unknown search key variant");
}

OwnerKeys GenerateOwnerKeys(const KeygenOptions& options, RandomSource& rng) {
  if (options.variant == Variant::kReal) {
    return OwnerKeys(real::GenerateSearchKeys(options.dim, options.prime_bits, rng,
                                              options.fixed, options.allow_small_primes));
  }
  return OwnerKeys(bin::GenerateSearchKeys(options.prime_bits, rng, options.allow_small_primes));
}

PreparedImage PrepareImage(const std::string& image_id, const GrayImage& image,
                           const RopRect& rect, const OwnerKeys& keys,
                           const access::PolicyNode& policy,
                           const access::Authority& authority, RandomSource& rng,
                           const UploadOptions& options, const Descriptor* descriptor) {
  CheckName(image_id, "image id");
  Separation sep;
  if (options.method == SeparationMethod::kMask) {
    sep = SeparateMask(image, rect);
  } else {
    sep = SeparateBlur(image, rect, options.kernel ? options.kernel : DefaultBlurKernel(rect));
  }
  PreparedImage out;
  out.image_id = image_id;
  out.descriptor = descriptor ? *descriptor : ToyExtract(Crop(image, rect), options.grid,
                                                         keys.variant());
  if (out.descriptor.variant() != keys.variant()) {
    Fail(ErrorCode::kVariantMismatch, "descriptor variant does not match the owner's keys");
  }
  out.public_bag = EncodePgm(sep.public_image);
  out.private_bag = access::MakePrivateBag(sep.secret, policy, authority, rng).Serialize();
  if (keys.variant() == Variant::kReal) {
    out.search_bag = real::OwnerEncryptDescriptor(out.descriptor, keys.real(), rng).Serialize();
  } else {
    out.search_bag = bin::GarbleDescriptor(out.descriptor, keys.bin(), rng).Serialize();
  }
  return out;
}

wire::UploadImage ToUpload(const std::string& owner, const PreparedImage& image) {
  return {owner, image.image_id, image.public_bag, image.private_bag, image.search_bag};
}

Querier::Querier(CloudClient& client, access::CredentialSet credentials, RandomSource& rng)
    : client_(client), credentials_(std::move(credentials)), rng_(rng) {}

Querier::OwnerState& Querier::State(const std::string& owner) {
  auto it = owners_.find(owner);
  if (it != owners_.end()) return it->second;
  wire::EnvelopeReply reply = client_.FetchEnvelope(owner);
  const Bytes payload =
      access::Unwrap(access::KeyEnvelope::Parse(reply.envelope), credentials_);
  OwnerKeys keys = OwnerKeys::Parse(payload);
  return owners_.emplace(owner, OwnerState{std::move(keys), std::move(reply.manifest)})
      .first->second;
}

const OwnerKeys& Querier::Unlock(const std::string& owner) { return State(owner).keys; }

const std::vector<std::string>& Querier::Manifest(const std::string& owner) {
  return State(owner).manifest;
}

SearchOutcome Querier::Search(const std::string& owner, const Descriptor& query,
                              std::size_t k, MatchThreshold alpha,
                              const std::string& session) {
  alpha.Validate();
  // Re-fetch so images uploaded since the last call are included.
  owners_.erase(owner);
  const OwnerState& state = State(owner);
  const OwnerKeys& keys = state.keys;
  if (query.variant() != keys.variant()) {
    Fail(ErrorCode::kVariantMismatch, "query descriptor variant does not match the owner");
  }
  wire::QueryJob job{session, owner, keys.variant(), {}};
  if (keys.variant() == Variant::kReal) {
    const real::SearchKeys& rk = keys.real();
    job.encoding = real::QuerierEncode(query, rk.pk, rk.r, rk.fixed, rng_).Serialize(rk.pk);
  } else {
    job.encoding = bin::EncodeQueryDescriptor(query, keys.bin()).Serialize();
  }
  const std::vector<wire::MatrixBlob> blobs = client_.Query(job);
  if (blobs.size() != state.manifest.size()) {
    Fail(ErrorCode::kProtocolViolation, "result count does not match the manifest");
  }
  SearchOutcome out;
  out.manifest = state.manifest;
  std::vector<ScoredImage> scored;
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const wire::MatrixBlob& b = blobs[i];
    if (b.image_index != i || b.cols != query.size()) {
      Fail(ErrorCode::kProtocolViolation, "results out of order or mis-shaped");
    }
    const EncryptedDistanceMatrix m =
        EncryptedDistanceMatrix::Parse(keys.pk(), b.image_index, b.rows, b.cols, b.data);
    const int score = ScoreMatrix(m, keys.sk(), alpha);
    out.scores.push_back(score);
    scored.push_back({state.manifest[i], score});
  }
  if (k > scored.size()) {
    out.clamped = true;
    k = scored.size();
  }
  for (const ScoredImage& s : RankTopK(std::move(scored), k)) {
    const auto pos = std::find(out.manifest.begin(), out.manifest.end(), s.image_id);
    out.ranked.push_back(
        {static_cast<std::size_t>(pos - out.manifest.begin()), s.image_id, s.score});
  }
  return out;
}

std::vector<RetrievedImage> Querier::Retrieve(const std::string& owner,
                                              const std::vector<std::size_t>& indices,
                                              std::size_t n) {
  const OwnerState& state = State(owner);
  const std::size_t db = state.manifest.size();
  n = std::clamp(n, indices.size(), db);
  const ot::OtChoice choice = ot::MakeChoice(indices, n, db, rng_);
  const ot::Receiver receiver(ot::DefaultGroup(), choice, db, rng_);
  const ot::OtResponse response = client_.Retrieve(owner, receiver.request());
  const std::vector<Bytes> items = receiver.Finalize(response);
  std::vector<RetrievedImage> out;
  for (std::size_t j = 0; j < items.size(); ++j) {
    auto [pub, priv] = UnpackRetrievalItem(items[j]);
    RetrievedImage r;
    r.image_index = indices[j];
    r.image_id = state.manifest[indices[j]];
    r.public_image = DecodePgm(pub);
    const SecretPart secret =
        access::OpenPrivateBag(access::PrivateBag::Parse(priv), credentials_);
    r.image = Recover(r.public_image, secret);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace photoveil
