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

#ifndef PHOTOVEIL_SERVICE_H_
#define PHOTOVEIL_SERVICE_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string_view>

#include "photoveil/random.h"
#include "photoveil/search_cloud.h"
#include "photoveil/sharing_cloud.h"
#include "photoveil/store.h"
#include "photoveil/wire.h"

namespace photoveil {

enum class Role { kSharing, kSearch, kBoth };

std::string_view RoleName(Role role);
// Throws kInvalidArgument.
Role ParseRole(std::string_view name);

// Maps wire messages onto the clouds a role hosts.
class Service {
 public:
  // `sharing` may be null for kSearch, `search` for kSharing.
  Service(Role role, SharingCloud* sharing, SearchCloud* search, RandomSource& rng);

  Role role() const { return role_; }

  // Never throws; failures come back as ERROR messages.
  wire::Message Handle(const wire::Message& request);

 private:
  wire::Message Dispatch(const wire::Message& request);
  wire::Message HandleUpload(const wire::Json& body);
  bool serves_sharing() const { return role_ != Role::kSearch; }
  bool serves_search() const { return role_ != Role::kSharing; }

  Role role_;
  SharingCloud* sharing_;
  SearchCloud* search_;
  RandomSource& rng_;
};

// Stores, clouds and service for one role. With a root directory, bags
// persist under root/sharing and root/search; otherwise they live in memory.
class CloudHost {
 public:
  CloudHost(Role role, const std::filesystem::path& root, RandomSource& rng,
            std::size_t threads = 1);

  Service& service() { return *service_; }
  SharingCloud* sharing() { return sharing_.get(); }
  SearchCloud* search() { return search_.get(); }

 private:
  std::unique_ptr<Store> sharing_store_;
  std::unique_ptr<Store> search_store_;
  std::unique_ptr<SharingCloud> sharing_;
  std::unique_ptr<SearchCloud> search_;
  std::unique_ptr<Service> service_;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_SERVICE_H_
