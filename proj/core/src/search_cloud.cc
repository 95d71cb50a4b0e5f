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

#include "photoveil/search_cloud.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include "photoveil/error.h"
#include "photoveil/search_bin.h"
#include "photoveil/search_real.h"

namespace photoveil {

namespace {

// Every bag starts with u8 variant | blob n.
struct BagHeader {
  Variant variant;
  Bytes modulus;
};

BagHeader ReadHeader(ByteSpan bag) {
  ByteReader rd(bag);
  const std::uint8_t tag = rd.U8();
  if (tag > 1) Fail(ErrorCode::kParseError, "unknown search bag variant");
  ByteSpan n = rd.Blob();
  return {tag == 0 ? Variant::kReal : Variant::kBinary, Bytes(n.begin(), n.end())};
}

void ParallelFor(std::size_t count, std::size_t threads,
                 const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

SearchCloud::SearchCloud(Store& store, std::size_t threads)
    : store_(store), threads_(threads) {}

void SearchCloud::RegisterOwner(const std::string& owner, ByteSpan envelope) {
  CheckName(owner, "owner id");
  if (!store_.PutEnvelope(owner, envelope)) {
    Fail(ErrorCode::kConflict, "owner '" + owner + "' already registered differently");
  }
}

void SearchCloud::UploadSearchBag(const std::string& owner, const std::string& image_id,
                                  ByteSpan search_bag) {
  CheckName(owner, "owner id");
  CheckName(image_id, "image id");
  if (search_bag.empty()) {
    Fail(ErrorCode::kMalformedRecord, "image '" + image_id + "' has no search bag");
  }
  BagHeader header;
  try {
    header = ReadHeader(search_bag);
    if (header.variant == Variant::kReal) {
      real::SearchBag::Parse(search_bag);
    } else {
      bin::SearchBag::Parse(search_bag);
    }
  } catch (const Error& e) {
    Fail(ErrorCode::kMalformedRecord, "image '" + image_id + "': " + e.what());
  }
  const std::vector<std::string> ids = store_.ImageIds(owner);
  for (const std::string& other : ids) {
    if (other == image_id) continue;
    std::optional<Bytes> existing = store_.GetBag(owner, other, kSearchBag);
    if (!existing) continue;
    const BagHeader h = ReadHeader(*existing);
    if (h.variant != header.variant || h.modulus != header.modulus) {
      Fail(ErrorCode::kMalformedRecord,
           "image '" + image_id + "' uses a different variant or key than '" + other + "'");
    }
    break;
  }
  const std::map<std::string, Bytes> bags = {
      {std::string(kSearchBag), Bytes(search_bag.begin(), search_bag.end())}};
  if (!store_.PutImage(owner, image_id, bags)) {
    Fail(ErrorCode::kConflict, "image '" + image_id + "' already stored with other content");
  }
}

std::vector<wire::MatrixBlob> SearchCloud::ExecuteQuery(const wire::QueryJob& job) const {
  CheckName(job.owner_id, "owner id");
  if (!store_.HasOwner(job.owner_id)) {
    Fail(ErrorCode::kNotFound, "unknown owner '" + job.owner_id + "'");
  }
  const std::vector<std::string> ids = store_.ImageIds(job.owner_id);
  std::vector<Bytes> raw;
  raw.reserve(ids.size());
  for (const std::string& id : ids) {
    std::optional<Bytes> bag = store_.GetBag(job.owner_id, id, kSearchBag);
    if (!bag) Fail(ErrorCode::kNotFound, "search bag for '" + id + "' missing");
    if (ReadHeader(*bag).variant != job.variant) {
      Fail(ErrorCode::kVariantMismatch, "query variant " + std::string(VariantName(job.variant)) +
                                            " does not match stored bags");
    }
    raw.push_back(std::move(*bag));
  }
  std::vector<wire::MatrixBlob> results(raw.size());
  if (raw.empty()) return results;

  if (job.variant == Variant::kReal) {
    const real::SearchBag first = real::SearchBag::Parse(raw[0]);
    const real::QueryEncoding query = real::QueryEncoding::Parse(first.pk, job.encoding);
    ParallelFor(raw.size(), threads_, [&](std::size_t i) {
      const real::SearchBag bag = i == 0 ? first : real::SearchBag::Parse(raw[i]);
      if (!(bag.pk == first.pk)) Fail(ErrorCode::kKeyMismatch, "owner bags use different keys");
      const EncryptedDistanceMatrix m = real::CloudDistanceMatrix(bag, query, i);
      results[i] = {i, m.rows, m.cols, m.Serialize(bag.pk)};
    });
  } else {
    const bin::QueryEncoding query = bin::QueryEncoding::Parse(job.encoding);
    ParallelFor(raw.size(), threads_, [&](std::size_t i) {
      const bin::SearchBag bag = bin::SearchBag::Parse(raw[i]);
      const EncryptedDistanceMatrix m = bin::CloudEvalMatrix(bag, query, i);
      results[i] = {i, m.rows, m.cols, m.Serialize(bag.pk)};
    });
  }
  return results;
}

}  // namespace photoveil
