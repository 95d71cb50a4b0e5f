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

#ifndef PHOTOVEIL_SEARCH_CLOUD_H_
#define PHOTOVEIL_SEARCH_CLOUD_H_

#include <cstddef>
#include <string>
#include <vector>

#include "photoveil/bytes.h"
#include "photoveil/store.h"
#include "photoveil/wire.h"

namespace photoveil {

// Holds search bags and evaluates queries over them. Works from public
// material only: bags, query encodings and the modulus embedded in the bags.
class SearchCloud {
 public:
  explicit SearchCloud(Store& store, std::size_t threads = 1);

  // Registers the owner so an empty owner can be queried.
  void RegisterOwner(const std::string& owner, ByteSpan envelope);
  // Throws kMalformedRecord if the bag does not parse or its variant or
  // modulus differs from the owner's other bags; kConflict on a changed
  // re-upload.
  void UploadSearchBag(const std::string& owner, const std::string& image_id,
                       ByteSpan search_bag);

  // One matrix per stored image, ascending image index. Throws kNotFound for
  // unknown owners and kVariantMismatch if the job's variant differs from
  // the stored bags.
  std::vector<wire::MatrixBlob> ExecuteQuery(const wire::QueryJob& job) const;

 private:
  Store& store_;
  std::size_t threads_;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_SEARCH_CLOUD_H_
