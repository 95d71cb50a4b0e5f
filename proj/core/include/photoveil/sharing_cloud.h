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

#ifndef PHOTOVEIL_SHARING_CLOUD_H_
#define PHOTOVEIL_SHARING_CLOUD_H_

#include <string>
#include <utility>
#include <vector>

#include "photoveil/bytes.h"
#include "photoveil/ot.h"
#include "photoveil/random.h"
#include "photoveil/store.h"
#include "photoveil/wire.h"

namespace photoveil {

// OT item for one image: u32 len(public) | public bag | private bag.
Bytes PackRetrievalItem(ByteSpan public_bag, ByteSpan private_bag);
std::pair<Bytes, Bytes> UnpackRetrievalItem(ByteSpan item);

// Holds key envelopes plus public and private bags; serves envelopes and
// oblivious retrieval. Never unwraps anything it stores.
class SharingCloud {
 public:
  explicit SharingCloud(Store& store, const ot::Group& group = ot::DefaultGroup());

  // Throws kConflict if a different envelope is stored for the owner.
  void UploadEnvelope(const std::string& owner, ByteSpan envelope);
  // Throws kMalformedRecord if the public bag is not a PGM image or the
  // private bag does not parse; kConflict on a changed re-upload.
  void UploadImage(const std::string& owner, const std::string& image_id,
                   ByteSpan public_bag, ByteSpan private_bag);

  // Throws kNotFound for unknown owners.
  wire::EnvelopeReply FetchEnvelope(const std::string& owner) const;

  // Fresh sender state per call. Throws kNotFound for unknown owners or
  // indices.
  ot::OtResponse Retrieve(const std::string& owner, const ot::OtRequest& request,
                          RandomSource& rng) const;

 private:
  Store& store_;
  const ot::Group& group_;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_SHARING_CLOUD_H_
