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

#include "photoveil/wire.h"

namespace photoveil::wire {

namespace {

Json BigIntToJson(const BigInt& v) { return ToBase64(ToBytes(v)); }

BigInt BigIntFromJson(const Json& j) {
  if (!j.is_string()) Fail(ErrorCode::kProtocolViolation, "expected base64 group element");
  return FromBytes(FromBase64(j.get<std::string>()));
}

const Json& Field(const Json& body, const char* key, ErrorCode code) {
  if (!body.is_object()) Fail(code, "message body is not an object");
  auto it = body.find(key);
  if (it == body.end()) Fail(code, std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::size_t> IndexList(const Json& j, const char* what) {
  if (!j.is_array()) Fail(ErrorCode::kProtocolViolation, std::string(what) + ": expected array");
  std::vector<std::size_t> out;
  for (const Json& v : j) {
    if (!v.is_number_unsigned()) {
      Fail(ErrorCode::kProtocolViolation, std::string(what) + ": expected indices");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

Bytes EncodeFrame(const Message& msg) {
  const Json j = {{"body", msg.body}, {"type", msg.type}};
  const std::string text = j.dump();
  if (text.size() > kMaxFrameBytes) Fail(ErrorCode::kProtocolViolation, "frame too large");
  ByteWriter w;
  w.U32(static_cast<std::uint32_t>(text.size()));
  w.Raw(AsBytes(text));
  return w.Take();
}

Message DecodeBody(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) Fail(ErrorCode::kParseError, "frame is not JSON");
  auto type = j.find("type");
  auto body = j.find("body");
  if (type == j.end() || !type->is_string() || body == j.end() || !body->is_object()) {
    Fail(ErrorCode::kProtocolViolation, "frame needs 'type' and 'body'");
  }
  return Message{type->get<std::string>(), *body};
}

Message DecodeFrame(ByteSpan frame) {
  ByteReader rd(frame);
  const std::uint32_t len = rd.U32();
  if (len > kMaxFrameBytes) Fail(ErrorCode::kProtocolViolation, "frame too large");
  ByteSpan text = rd.Raw(len);
  rd.ExpectDone();
  return DecodeBody(AsString(text));
}

Message ErrorMessage(const Error& e) {
  return Message{std::string(kError),
                 {{"code", std::string(ErrorCodeName(e.code()))}, {"message", e.what()}}};
}

void ExpectType(const Message& msg, std::string_view type) {
  if (msg.type == kError) {
    const std::string code = GetString(msg.body, "code");
    const std::string text = GetString(msg.body, "message");
    Fail(ErrorCodeFromName(code), text);
  }
  if (msg.type != type) {
    Fail(ErrorCode::kProtocolViolation,
         "expected " + std::string(type) + ", got " + msg.type);
  }
}

std::string GetString(const Json& body, const char* key, ErrorCode code) {
  const Json& v = Field(body, key, code);
  if (!v.is_string()) Fail(code, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Bytes GetBytes(const Json& body, const char* key, ErrorCode code) {
  try {
    return FromBase64(GetString(body, key, code));
  } catch (const Error& e) {
    if (e.code() == code) throw;
    Fail(code, std::string("field '") + key + "' is not base64");
  }
}

std::size_t GetIndex(const Json& body, const char* key, ErrorCode code) {
  const Json& v = Field(body, key, code);
  if (!v.is_number_unsigned()) {
    Fail(code, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool Has(const Json& body, const char* key) {
  return body.is_object() && body.contains(key);
}

Message MakeUploadEnvelope(const std::string& owner, ByteSpan envelope) {
  return Message{std::string(kUpload),
                 {{"envelope", ToBase64(envelope)}, {"kind", "envelope"}, {"owner", owner}}};
}

Message MakeUploadImage(const UploadImage& up) {
  Json body = {{"image_id", up.image_id}, {"kind", "image"}, {"owner", up.owner}};
  if (!up.public_bag.empty()) body["public_bag"] = ToBase64(up.public_bag);
  if (!up.private_bag.empty()) body["private_bag"] = ToBase64(up.private_bag);
  if (!up.search_bag.empty()) body["search_bag"] = ToBase64(up.search_bag);
  return Message{std::string(kUpload), std::move(body)};
}

Message MakeFetchEnvelope(const std::string& owner) {
  return Message{std::string(kFetchEnvelope), {{"owner", owner}}};
}

Json EnvelopeReplyBody(const EnvelopeReply& reply) {
  return {{"envelope", ToBase64(reply.envelope)}, {"manifest", reply.manifest}};
}

EnvelopeReply ParseEnvelopeReply(const Json& body) {
  EnvelopeReply r;
  r.envelope = GetBytes(body, "envelope");
  const Json& m = Field(body, "manifest", ErrorCode::kProtocolViolation);
  if (!m.is_array()) Fail(ErrorCode::kProtocolViolation, "manifest must be an array");
  for (const Json& id : m) {
    if (!id.is_string()) Fail(ErrorCode::kProtocolViolation, "manifest ids must be strings");
    r.manifest.push_back(id.get<std::string>());
  }
  return r;
}

Message MakeQuery(const QueryJob& job) {
  return Message{std::string(kQuery),
                 {{"encoding", ToBase64(job.encoding)},
                  {"owner", job.owner_id},
                  {"session", job.session_id},
                  {"variant", std::string(VariantName(job.variant))}}};
}

QueryJob ParseQuery(const Json& body) {
  QueryJob job;
  job.session_id = GetString(body, "session");
  job.owner_id = GetString(body, "owner");
  try {
    job.variant = ParseVariant(GetString(body, "variant"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kProtocolViolation) throw;
    Fail(ErrorCode::kProtocolViolation, e.what());
  }
  job.encoding = GetBytes(body, "encoding");
  return job;
}

Json QueryResultBody(const std::string& session_id, const std::vector<MatrixBlob>& results) {
  Json list = Json::array();
  for (const MatrixBlob& m : results) {
    list.push_back({{"cols", m.cols},
                    {"data", ToBase64(m.data)},
                    {"image_index", m.image_index},
                    {"rows", m.rows}});
  }
  return {{"results", list}, {"session", session_id}};
}

std::vector<MatrixBlob> ParseQueryResult(const Json& body) {
  const Json& list = Field(body, "results", ErrorCode::kProtocolViolation);
  if (!list.is_array()) Fail(ErrorCode::kProtocolViolation, "results must be an array");
  std::vector<MatrixBlob> out;
  for (const Json& m : list) {
    out.push_back(MatrixBlob{GetIndex(m, "image_index"), GetIndex(m, "rows"),
                             GetIndex(m, "cols"), GetBytes(m, "data")});
  }
  return out;
}

Message MakeOtRequest(const std::string& owner, const ot::OtRequest& request) {
  Json blinded = Json::array();
  for (const BigInt& b : request.blinded) blinded.push_back(BigIntToJson(b));
  return Message{std::string(kOtRequest),
                 {{"blinded", blinded}, {"owner", owner}, {"sigma_prime", request.sigma_prime}}};
}

ot::OtRequest ParseOtRequest(const Json& body, std::string* owner) {
  if (owner) *owner = GetString(body, "owner");
  ot::OtRequest req;
  req.sigma_prime =
      IndexList(Field(body, "sigma_prime", ErrorCode::kProtocolViolation), "sigma_prime");
  const Json& blinded = Field(body, "blinded", ErrorCode::kProtocolViolation);
  if (!blinded.is_array()) Fail(ErrorCode::kProtocolViolation, "blinded must be an array");
  for (const Json& b : blinded) req.blinded.push_back(BigIntFromJson(b));
  return req;
}

Json OtResponseBody(const ot::OtResponse& response) {
  Json tables = Json::array();
  for (const auto& table : response.key_tables) {
    Json t = Json::array();
    for (const Bytes& entry : table) t.push_back(ToBase64(entry));
    tables.push_back(std::move(t));
  }
  Json items = Json::array();
  for (const Bytes& item : response.items) items.push_back(ToBase64(item));
  return {{"items", items},
          {"key_tables", tables},
          {"sigma_prime", response.sigma_prime},
          {"y", BigIntToJson(response.y_pub)}};
}

ot::OtResponse ParseOtResponse(const Json& body) {
  ot::OtResponse resp;
  resp.y_pub = BigIntFromJson(Field(body, "y", ErrorCode::kProtocolViolation));
  resp.sigma_prime =
      IndexList(Field(body, "sigma_prime", ErrorCode::kProtocolViolation), "sigma_prime");
  const Json& tables = Field(body, "key_tables", ErrorCode::kProtocolViolation);
  const Json& items = Field(body, "items", ErrorCode::kProtocolViolation);
  if (!tables.is_array() || !items.is_array()) {
    Fail(ErrorCode::kProtocolViolation, "OT response tables and items must be arrays");
  }
  for (const Json& t : tables) {
    if (!t.is_array()) Fail(ErrorCode::kProtocolViolation, "key table must be an array");
    std::vector<Bytes> table;
    for (const Json& e : t) {
      if (!e.is_string()) Fail(ErrorCode::kProtocolViolation, "key table entry");
      table.push_back(FromBase64(e.get<std::string>()));
    }
    resp.key_tables.push_back(std::move(table));
  }
  for (const Json& i : items) {
    if (!i.is_string()) Fail(ErrorCode::kProtocolViolation, "OT item");
    resp.items.push_back(FromBase64(i.get<std::string>()));
  }
  return resp;
}

}  // namespace photoveil::wire
