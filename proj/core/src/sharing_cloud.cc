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

#include "photoveil/sharing_cloud.h"

#include "photoveil/access.h"
#include "photoveil/error.h"
#include "photoveil/image.h"

namespace photoveil {

Bytes PackRetrievalItem(ByteSpan public_bag, ByteSpan private_bag) {
  ByteWriter w;
  w.Blob(public_bag);
  w.Raw(private_bag);
  return w.Take();
}

std::pair<Bytes, Bytes> UnpackRetrievalItem(ByteSpan item) {
  ByteReader rd(item);
  ByteSpan pub = rd.Blob();
  ByteSpan priv = item.subspan(rd.offset());
  return {Bytes(pub.begin(), pub.end()), Bytes(priv.begin(), priv.end())};
}

SharingCloud::SharingCloud(Store& store, const ot::Group& group)
    : store_(store), group_(group) {}

void SharingCloud::UploadEnvelope(const std::string& owner, ByteSpan envelope) {
  CheckName(owner, "owner id");
  if (envelope.empty()) Fail(ErrorCode::kMalformedRecord, "empty key envelope");
  if (!store_.PutEnvelope(owner, envelope)) {
    Fail(ErrorCode::kConflict, "owner '" + owner + "' already has a different envelope");
  }
}

void SharingCloud::UploadImage(const std::string& owner, const std::string& image_id,
                               ByteSpan public_bag, ByteSpan private_bag) {
  CheckName(owner, "owner id");
  CheckName(image_id, "image id");
  if (public_bag.empty() || private_bag.empty()) {
    Fail(ErrorCode::kMalformedRecord, "image '" + image_id + "' needs public and private bags");
  }
  try {
    DecodePgm(public_bag);
    access::PrivateBag::Parse(private_bag);
  } catch (const Error& e) {
    Fail(ErrorCode::kMalformedRecord, "image '" + image_id + "': " + e.what());
  }
  const std::map<std::string, Bytes> bags = {
      {std::string(kPublicBag), Bytes(public_bag.begin(), public_bag.end())},
      {std::string(kPrivateBag), Bytes(private_bag.begin(), private_bag.end())}};
  if (!store_.PutImage(owner, image_id, bags)) {
    Fail(ErrorCode::kConflict, "image '" + image_id + "' already stored with other content");
  }
}

wire::EnvelopeReply SharingCloud::FetchEnvelope(const std::string& owner) const {
  CheckName(owner, "owner id");
  std::optional<Bytes> env = store_.GetEnvelope(owner);
  if (!env) Fail(ErrorCode::kNotFound, "no envelope for owner '" + owner + "'");
  return {std::move(*env), store_.ImageIds(owner)};
}

ot::OtResponse SharingCloud::Retrieve(const std::string& owner,
                                      const ot::OtRequest& request,
                                      RandomSource& rng) const {
  CheckName(owner, "owner id");
  if (!store_.HasOwner(owner)) Fail(ErrorCode::kNotFound, "unknown owner '" + owner + "'");
  const std::vector<std::string> ids = store_.ImageIds(owner);
  if (ids.empty()) Fail(ErrorCode::kNotFound, "owner '" + owner + "' has no images");
  for (std::size_t i : request.sigma_prime) {
    if (i >= ids.size()) Fail(ErrorCode::kNotFound, "image index " + std::to_string(i) + " not stored");
  }
  std::vector<Bytes> items;
  items.reserve(ids.size());
  for (const std::string& id : ids) {
    std::optional<Bytes> pub = store_.GetBag(owner, id, kPublicBag);
    std::optional<Bytes> priv = store_.GetBag(owner, id, kPrivateBag);
    if (!pub || !priv) Fail(ErrorCode::kNotFound, "bags for '" + id + "' missing");
    items.push_back(PackRetrievalItem(*pub, *priv));
  }
  const ot::Sender sender(group_, std::move(items), rng);
  return sender.Respond(request, rng);
}

}  // namespace photoveil
