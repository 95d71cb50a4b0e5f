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

#ifndef PHOTOVEIL_STORE_H_
#define PHOTOVEIL_STORE_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "photoveil/bytes.h"

// Blob storage behind the clouds. Records are keyed by (owner, image id,
// kind); image ids keep upload order, which defines the image index.
namespace photoveil {

inline constexpr std::string_view kPublicBag = "public";
inline constexpr std::string_view kPrivateBag = "private";
inline constexpr std::string_view kSearchBag = "search";

// Throws kMalformedRecord unless `name` is [A-Za-z0-9_.-]+, not starting
// with '.'.
void CheckName(std::string_view name, std::string_view what);

class Store {
 public:
  virtual ~Store() = default;

  virtual std::optional<Bytes> GetEnvelope(const std::string& owner) const = 0;
  // Stores the envelope if absent. Returns false (and stores nothing) if a
  // different envelope is already present.
  virtual bool PutEnvelope(const std::string& owner, ByteSpan envelope) = 0;

  virtual bool HasOwner(const std::string& owner) const = 0;
  // Image ids in index order; empty for unknown owners.
  virtual std::vector<std::string> ImageIds(const std::string& owner) const = 0;
  virtual std::optional<Bytes> GetBag(const std::string& owner, const std::string& image_id,
                                      std::string_view kind) const = 0;

  // Adds all bags of an image atomically. Returns false if the image exists
  // with different content; identical re-uploads succeed without change.
  virtual bool PutImage(const std::string& owner, const std::string& image_id,
                        const std::map<std::string, Bytes>& bags) = 0;
};

class MemoryStore final : public Store {
 public:
  std::optional<Bytes> GetEnvelope(const std::string& owner) const override;
  bool PutEnvelope(const std::string& owner, ByteSpan envelope) override;
  bool HasOwner(const std::string& owner) const override;
  std::vector<std::string> ImageIds(const std::string& owner) const override;
  std::optional<Bytes> GetBag(const std::string& owner, const std::string& image_id,
                              std::string_view kind) const override;
  bool PutImage(const std::string& owner, const std::string& image_id,
                const std::map<std::string, Bytes>& bags) override;

 private:
  struct OwnerData {
    std::optional<Bytes> envelope;
    std::vector<std::string> order;
    std::map<std::string, std::map<std::string, Bytes>> images;
  };

  mutable std::mutex mu_;
  std::map<std::string, OwnerData> owners_;
};

// root/<owner>/envelope, root/<owner>/manifest (one image id per line) and
// root/<owner>/<image_id>.<kind>.
class DirectoryStore final : public Store {
 public:
  explicit DirectoryStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::optional<Bytes> GetEnvelope(const std::string& owner) const override;
  bool PutEnvelope(const std::string& owner, ByteSpan envelope) override;
  bool HasOwner(const std::string& owner) const override;
  std::vector<std::string> ImageIds(const std::string& owner) const override;
  std::optional<Bytes> GetBag(const std::string& owner, const std::string& image_id,
                              std::string_view kind) const override;
  bool PutImage(const std::string& owner, const std::string& image_id,
                const std::map<std::string, Bytes>& bags) override;

 private:
  std::filesystem::path OwnerDir(const std::string& owner) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_STORE_H_
