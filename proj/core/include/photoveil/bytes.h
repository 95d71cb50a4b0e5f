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

#ifndef PHOTOVEIL_BYTES_H_
#define PHOTOVEIL_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace photoveil {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}
inline std::string AsString(ByteSpan b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

std::string ToBase64(ByteSpan data);
// Throws kParseError on malformed input.
Bytes FromBase64(std::string_view text);
std::string ToHex(ByteSpan data);
Bytes FromHex(std::string_view text);

// Big-endian binary framing used by every bag and encoding serializer.
class ByteWriter {
 public:
  void U8(std::uint8_t v) { out_.push_back(v); }
  void U32(std::uint32_t v);
  void Raw(ByteSpan data) { out_.insert(out_.end(), data.begin(), data.end()); }
  // u32 length followed by the bytes.
  void Blob(ByteSpan data);

  Bytes Take() { return std::move(out_); }
  std::size_t size() const { return out_.size(); }

 private:
  Bytes out_;
};

// Every read is bounds-checked; overruns throw kParseError with the offset.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  std::uint8_t U8();
  std::uint32_t U32();
  ByteSpan Raw(std::size_t n);
  ByteSpan Blob();

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }
  // Throws unless every byte was consumed.
  void ExpectDone() const;

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_BYTES_H_
