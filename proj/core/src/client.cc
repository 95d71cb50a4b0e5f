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

#include "photoveil/client.h"

namespace photoveil {

CloudClient::CloudClient(Transport& sharing, Transport& search)
    : sharing_(sharing), search_(search) {}

void CloudClient::UploadEnvelope(const std::string& owner, ByteSpan envelope) {
  const wire::Message msg = wire::MakeUploadEnvelope(owner, envelope);
  wire::ExpectType(sharing_.Call(msg), wire::kUpload);
  if (!combined()) wire::ExpectType(search_.Call(msg), wire::kUpload);
}

void CloudClient::UploadImage(const wire::UploadImage& image) {
  if (combined()) {
    wire::ExpectType(sharing_.Call(wire::MakeUploadImage(image)), wire::kUpload);
    return;
  }
  wire::UploadImage to_search{image.owner, image.image_id, {}, {}, image.search_bag};
  wire::ExpectType(search_.Call(wire::MakeUploadImage(to_search)), wire::kUpload);
  wire::UploadImage to_sharing{image.owner, image.image_id, image.public_bag,
                               image.private_bag, {}};
  wire::ExpectType(sharing_.Call(wire::MakeUploadImage(to_sharing)), wire::kUpload);
}

wire::EnvelopeReply CloudClient::FetchEnvelope(const std::string& owner) {
  const wire::Message reply = sharing_.Call(wire::MakeFetchEnvelope(owner));
  wire::ExpectType(reply, wire::kFetchEnvelope);
  return wire::ParseEnvelopeReply(reply.body);
}

std::vector<wire::MatrixBlob> CloudClient::Query(const wire::QueryJob& job) {
  const wire::Message reply = search_.Call(wire::MakeQuery(job));
  wire::ExpectType(reply, wire::kQueryResult);
  return wire::ParseQueryResult(reply.body);
}

ot::OtResponse CloudClient::Retrieve(const std::string& owner, const ot::OtRequest& request) {
  const wire::Message reply = sharing_.Call(wire::MakeOtRequest(owner, request));
  wire::ExpectType(reply, wire::kOtResponse);
  return wire::ParseOtResponse(reply.body);
}

}  // namespace photoveil
