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

#ifndef PHOTOVEIL_CLIENT_H_
#define PHOTOVEIL_CLIENT_H_

#include <string>
#include <vector>

#include "photoveil/ot.h"
#include "photoveil/transport.h"
#include "photoveil/wire.h"

namespace photoveil {

// Typed calls against a sharing endpoint and a search endpoint. Passing the
// same transport twice targets a combined ("both") cloud.
class CloudClient {
 public:
  CloudClient(Transport& sharing, Transport& search);

  void UploadEnvelope(const std::string& owner, ByteSpan envelope);
  void UploadImage(const wire::UploadImage& image);
  wire::EnvelopeReply FetchEnvelope(const std::string& owner);
  std::vector<wire::MatrixBlob> Query(const wire::QueryJob& job);
  ot::OtResponse Retrieve(const std::string& owner, const ot::OtRequest& request);

 private:
  bool combined() const { return &sharing_ == &search_; }

  Transport& sharing_;
  Transport& search_;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_CLIENT_H_
