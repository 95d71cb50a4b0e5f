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

#include "photoveil/error.h"

#include <array>
#include <utility>

namespace photoveil {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 27> kNames = {{
    {ErrorCode::kInvalidArgument, "INVALID_ARGUMENT"},
    {ErrorCode::kOutOfRange, "OUT_OF_RANGE"},
    {ErrorCode::kDimMismatch, "DIM_MISMATCH"},
    {ErrorCode::kInvalidRandomizer, "INVALID_RANDOMIZER"},
    {ErrorCode::kMalformedCiphertext, "MALFORMED_CIPHERTEXT"},
    {ErrorCode::kKeyMismatch, "KEY_MISMATCH"},
    {ErrorCode::kParseError, "PARSE_ERROR"},
    {ErrorCode::kUnsupportedFormat, "UNSUPPORTED_FORMAT"},
    {ErrorCode::kImageTooSmall, "IMAGE_TOO_SMALL"},
    {ErrorCode::kInvalidRect, "INVALID_RECT"},
    {ErrorCode::kInvalidKernel, "INVALID_KERNEL"},
    {ErrorCode::kRectMismatch, "RECT_MISMATCH"},
    {ErrorCode::kCorruptSecret, "CORRUPT_SECRET"},
    {ErrorCode::kNoMatchingRow, "NO_MATCHING_ROW"},
    {ErrorCode::kAuthFailure, "AUTH_FAILURE"},
    {ErrorCode::kAccessDenied, "ACCESS_DENIED"},
    {ErrorCode::kIntegrityFailure, "INTEGRITY_FAILURE"},
    {ErrorCode::kInvalidPolicy, "INVALID_POLICY"},
    {ErrorCode::kInvalidChoice, "INVALID_CHOICE"},
    {ErrorCode::kMalformedRequest, "MALFORMED_REQUEST"},
    {ErrorCode::kConflict, "CONFLICT"},
    {ErrorCode::kMalformedRecord, "MALFORMED_RECORD"},
    {ErrorCode::kNotFound, "NOT_FOUND"},
    {ErrorCode::kVariantMismatch, "VARIANT_MISMATCH"},
    {ErrorCode::kProtocolViolation, "PROTOCOL_VIOLATION"},
    {ErrorCode::kExistingKeys, "EXISTING_KEYS"},
    {ErrorCode::kIoError, "IO_ERROR"},
}};

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "UNKNOWN";
}

ErrorCode ErrorCodeFromName(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return ErrorCode::kProtocolViolation;
}

}  // namespace photoveil
