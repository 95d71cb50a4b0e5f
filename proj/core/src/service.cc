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

#include "photoveil/service.h"

#include <exception>
#include <string>

#include "photoveil/error.h"

namespace photoveil {

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kSharing:
      return "sharing";
    case Role::kSearch:
      return "search";
    case Role::kBoth:
      return "both";
  }
  return "both";
}

Role ParseRole(std::string_view name) {
  if (name == "sharing") return Role::kSharing;
  if (name == "search") return Role::kSearch;
  if (name == "both") return Role::kBoth;
  Fail(ErrorCode::kInvalidArgument,
       "unknown role '" + std::string(name) + "' (expected sharing, search or both)");
}

Service::Service(Role role, SharingCloud* sharing, SearchCloud* search, RandomSource& rng)
    : role_(role), sharing_(sharing), search_(search), rng_(rng) {
  if ((serves_sharing() && !sharing_) || (serves_search() && !search_)) {
    Fail(ErrorCode::kInvalidArgument, "service is missing a cloud for its role");
  }
}

wire::Message Service::Handle(const wire::Message& request) {
  try {
    return Dispatch(request);
  } catch (const Error& e) {
    return wire::ErrorMessage(e);
  } catch (const std::exception& e) {
    return wire::ErrorMessage(
        Error(ErrorCode::kProtocolViolation, std::string("internal error: ") + e.what()));
  }
}

wire::Message Service::Dispatch(const wire::Message& request) {
  const std::string& type = request.type;
  const auto not_served = [&] {
    Fail(ErrorCode::kProtocolViolation,
         type + " is not served by a " + std::string(RoleName(role_)) + " cloud");
  };
  if (type == wire::kUpload) return HandleUpload(request.body);
  if (type == wire::kFetchEnvelope) {
    if (!serves_sharing()) not_served();
    const std::string owner = wire::GetString(request.body, "owner");
    return {type, wire::EnvelopeReplyBody(sharing_->FetchEnvelope(owner))};
  }
  if (type == wire::kQuery) {
    if (!serves_search()) not_served();
    const wire::QueryJob job = wire::ParseQuery(request.body);
    return {std::string(wire::kQueryResult),
            wire::QueryResultBody(job.session_id, search_->ExecuteQuery(job))};
  }
  if (type == wire::kOtRequest) {
    if (!serves_sharing()) not_served();
    std::string owner;
    const ot::OtRequest req = wire::ParseOtRequest(request.body, &owner);
    return {std::string(wire::kOtResponse),
            wire::OtResponseBody(sharing_->Retrieve(owner, req, rng_))};
  }
  Fail(ErrorCode::kProtocolViolation, "unknown message type '" + type + "'");
}

wire::Message Service::HandleUpload(const wire::Json& body) {
  const std::string kind = wire::GetString(body, "kind", ErrorCode::kMalformedRecord);
  const std::string owner = wire::GetString(body, "owner", ErrorCode::kMalformedRecord);
  if (kind == "envelope") {
    const Bytes env = wire::GetBytes(body, "envelope", ErrorCode::kMalformedRecord);
    if (serves_sharing()) sharing_->UploadEnvelope(owner, env);
    if (serves_search()) search_->RegisterOwner(owner, env);
    return {std::string(wire::kUpload), {{"owner", owner}}};
  }
  if (kind != "image") Fail(ErrorCode::kMalformedRecord, "unknown upload kind '" + kind + "'");
  const std::string id = wire::GetString(body, "image_id", ErrorCode::kMalformedRecord);
  // Check presence of every required bag before writing anything.
  const auto need = [&](const char* field) {
    return wire::GetBytes(body, field, ErrorCode::kMalformedRecord);
  };
  Bytes pub, priv, search;
  if (serves_sharing()) {
    pub = need("public_bag");
    priv = need("private_bag");
  }
  if (serves_search()) search = need("search_bag");
  if (serves_search()) search_->UploadSearchBag(owner, id, search);
  if (serves_sharing()) sharing_->UploadImage(owner, id, pub, priv);
  return {std::string(wire::kUpload), {{"image_id", id}, {"owner", owner}}};
}

CloudHost::CloudHost(Role role, const std::filesystem::path& root, RandomSource& rng,
                     std::size_t threads) {
  const auto make_store = [&](const char* sub) -> std::unique_ptr<Store> {
    if (root.empty()) return std::make_unique<MemoryStore>();
    return std::make_unique<DirectoryStore>(root / sub);
  };
  if (role != Role::kSearch) {
    sharing_store_ = make_store("sharing");
    sharing_ = std::make_unique<SharingCloud>(*sharing_store_);
  }
  if (role != Role::kSharing) {
    search_store_ = make_store("search");
    search_ = std::make_unique<SearchCloud>(*search_store_, threads);
  }
  service_ = std::make_unique<Service>(role, sharing_.get(), search_.get(), rng);
}

}  // namespace photoveil
