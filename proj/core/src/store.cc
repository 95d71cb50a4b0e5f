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

#include "photoveil/store.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "photoveil/error.h"
#include "photoveil/image.h"

namespace photoveil {

namespace fs = std::filesystem;

void CheckName(std::string_view name, std::string_view what) {
  const bool ok =
      !name.empty() && name.size() <= 128 && name.front() != '.' &&
      std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
               c == '-';
      });
  if (!ok) {
    Fail(ErrorCode::kMalformedRecord,
         std::string(what) + " '" + std::string(name) + "' must match [A-Za-z0-9_.-]+");
  }
}

std::optional<Bytes> MemoryStore::GetEnvelope(const std::string& owner) const {
  std::lock_guard lock(mu_);
  auto it = owners_.find(owner);
  if (it == owners_.end()) return std::nullopt;
  return it->second.envelope;
}

bool MemoryStore::PutEnvelope(const std::string& owner, ByteSpan envelope) {
  std::lock_guard lock(mu_);
  OwnerData& data = owners_[owner];
  Bytes value(envelope.begin(), envelope.end());
  if (data.envelope) return *data.envelope == value;
  data.envelope = std::move(value);
  return true;
}

bool MemoryStore::HasOwner(const std::string& owner) const {
  std::lock_guard lock(mu_);
  return owners_.contains(owner);
}

std::vector<std::string> MemoryStore::ImageIds(const std::string& owner) const {
  std::lock_guard lock(mu_);
  auto it = owners_.find(owner);
  return it == owners_.end() ? std::vector<std::string>{} : it->second.order;
}

std::optional<Bytes> MemoryStore::GetBag(const std::string& owner,
                                         const std::string& image_id,
                                         std::string_view kind) const {
  std::lock_guard lock(mu_);
  auto o = owners_.find(owner);
  if (o == owners_.end()) return std::nullopt;
  auto img = o->second.images.find(image_id);
  if (img == o->second.images.end()) return std::nullopt;
  auto bag = img->second.find(std::string(kind));
  if (bag == img->second.end()) return std::nullopt;
  return bag->second;
}

bool MemoryStore::PutImage(const std::string& owner, const std::string& image_id,
                           const std::map<std::string, Bytes>& bags) {
  std::lock_guard lock(mu_);
  OwnerData& data = owners_[owner];
  auto it = data.images.find(image_id);
  if (it != data.images.end()) return it->second == bags;
  data.images[image_id] = bags;
  data.order.push_back(image_id);
  return true;
}

DirectoryStore::DirectoryStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) Fail(ErrorCode::kIoError, "cannot create " + root_.string() + ": " + ec.message());
}

fs::path DirectoryStore::OwnerDir(const std::string& owner) const {
  CheckName(owner, "owner id");
  return root_ / owner;
}

std::optional<Bytes> DirectoryStore::GetEnvelope(const std::string& owner) const {
  std::lock_guard lock(mu_);
  const fs::path p = OwnerDir(owner) / "envelope";
  if (!fs::exists(p)) return std::nullopt;
  return ReadFileBytes(p);
}

bool DirectoryStore::PutEnvelope(const std::string& owner, ByteSpan envelope) {
  std::lock_guard lock(mu_);
  const fs::path dir = OwnerDir(owner);
  fs::create_directories(dir);
  const fs::path p = dir / "envelope";
  if (fs::exists(p)) {
    const Bytes existing = ReadFileBytes(p);
    return std::equal(existing.begin(), existing.end(), envelope.begin(), envelope.end());
  }
  WriteFileBytes(p, envelope);
  return true;
}

bool DirectoryStore::HasOwner(const std::string& owner) const {
  std::lock_guard lock(mu_);
  return fs::is_directory(OwnerDir(owner));
}

std::vector<std::string> DirectoryStore::ImageIds(const std::string& owner) const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  std::ifstream in(OwnerDir(owner) / "manifest");
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

std::optional<Bytes> DirectoryStore::GetBag(const std::string& owner,
                                            const std::string& image_id,
                                            std::string_view kind) const {
  std::lock_guard lock(mu_);
  CheckName(image_id, "image id");
  const fs::path p = OwnerDir(owner) / (image_id + "." + std::string(kind));
  if (!fs::exists(p)) return std::nullopt;
  return ReadFileBytes(p);
}

bool DirectoryStore::PutImage(const std::string& owner, const std::string& image_id,
                              const std::map<std::string, Bytes>& bags) {
  std::lock_guard lock(mu_);
  CheckName(image_id, "image id");
  const fs::path dir = OwnerDir(owner);
  fs::create_directories(dir);
  std::vector<std::string> ids;
  {
    std::ifstream in(dir / "manifest");
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) ids.push_back(line);
    }
  }
  if (std::find(ids.begin(), ids.end(), image_id) != ids.end()) {
    for (const auto& [kind, data] : bags) {
      const fs::path p = dir / (image_id + "." + kind);
      if (!fs::exists(p) || ReadFileBytes(p) != data) return false;
    }
    for (std::string_view kind : {kPublicBag, kPrivateBag, kSearchBag}) {
      const std::string k(kind);
      if (!bags.contains(k) && fs::exists(dir / (image_id + "." + k))) return false;
    }
    return true;
  }
  for (const auto& [kind, data] : bags) WriteFileBytes(dir / (image_id + "." + kind), data);
  std::ofstream out(dir / "manifest", std::ios::app);
  out << image_id << '\n';
  if (!out) Fail(ErrorCode::kIoError, "cannot append to manifest in " + dir.string());
  return true;
}

}  // namespace photoveil
