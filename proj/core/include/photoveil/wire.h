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

#ifndef PHOTOVEIL_WIRE_H_
#define PHOTOVEIL_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "photoveil/bytes.h"
#include "photoveil/descriptor.h"
#include "photoveil/error.h"
#include "photoveil/ot.h"

// Cloud wire format: a 4-byte big-endian length followed by UTF-8 JSON
// {"body": ..., "type": ...}. Keys serialize in alphabetical order, so equal
// messages are equal bytes.
namespace photoveil::wire {

using Json = nlohmann::json;

inline constexpr std::string_view kUpload = "UPLOAD";
inline constexpr std::string_view kFetchEnvelope = "FETCH_ENVELOPE";
inline constexpr std::string_view kQuery = "QUERY";
inline constexpr std::string_view kQueryResult = "QUERY_RESULT";
inline constexpr std::string_view kOtRequest = "OT_REQUEST";
inline constexpr std::string_view kOtResponse = "OT_RESPONSE";
inline constexpr std::string_view kError = "ERROR";

inline constexpr std::uint16_t kSharingPort = 7701;
inline constexpr std::uint16_t kSearchPort = 7702;
inline constexpr std::size_t kMaxFrameBytes = std::size_t{1} << 30;

struct Message {
  std::string type;
  Json body = Json::object();

  bool operator==(const Message&) const = default;
};

// Frame = length prefix + JSON text.
Bytes EncodeFrame(const Message& msg);
// Parses one complete frame; throws kParseError / kProtocolViolation.
Message DecodeFrame(ByteSpan frame);
// Parses the JSON text after the length prefix.
Message DecodeBody(std::string_view text);

Message ErrorMessage(const Error& e);
// Throws the carried error if msg is an ERROR; kProtocolViolation if msg has
// an unexpected type.
void ExpectType(const Message& msg, std::string_view type);

// Typed field access; missing or mistyped fields throw `code`.
std::string GetString(const Json& body, const char* key,
                      ErrorCode code = ErrorCode::kProtocolViolation);
Bytes GetBytes(const Json& body, const char* key,
               ErrorCode code = ErrorCode::kProtocolViolation);
std::size_t GetIndex(const Json& body, const char* key,
                     ErrorCode code = ErrorCode::kProtocolViolation);
bool Has(const Json& body, const char* key);

struct UploadImage {
  std::string owner;
  std::string image_id;
  Bytes public_bag;   // may be empty when sent to the search cloud only
  Bytes private_bag;  // ditto
  Bytes search_bag;   // may be empty when sent to the sharing cloud only
};

Message MakeUploadEnvelope(const std::string& owner, ByteSpan envelope);
Message MakeUploadImage(const UploadImage& up);

struct EnvelopeReply {
  Bytes envelope;
  std::vector<std::string> manifest;  // image ids in index order
};

Message MakeFetchEnvelope(const std::string& owner);
Json EnvelopeReplyBody(const EnvelopeReply& reply);
EnvelopeReply ParseEnvelopeReply(const Json& body);

struct QueryJob {
  std::string session_id;
  std::string owner_id;
  Variant variant = Variant::kReal;
  Bytes encoding;
};

Message MakeQuery(const QueryJob& job);
QueryJob ParseQuery(const Json& body);

struct MatrixBlob {
  std::size_t image_index = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Bytes data;  // EncryptedDistanceMatrix::Serialize

  bool operator==(const MatrixBlob&) const = default;
};

Json QueryResultBody(const std::string& session_id, const std::vector<MatrixBlob>& results);
std::vector<MatrixBlob> ParseQueryResult(const Json& body);

Message MakeOtRequest(const std::string& owner, const ot::OtRequest& request);
ot::OtRequest ParseOtRequest(const Json& body, std::string* owner);
Json OtResponseBody(const ot::OtResponse& response);
ot::OtResponse ParseOtResponse(const Json& body);

}  // namespace photoveil::wire

#endif  // PHOTOVEIL_WIRE_H_
