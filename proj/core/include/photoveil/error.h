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

#ifndef PHOTOVEIL_ERROR_H_
#define PHOTOVEIL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace photoveil {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kDimMismatch,
  kInvalidRandomizer,
  kMalformedCiphertext,
  kKeyMismatch,
  kParseError,
  kUnsupportedFormat,
  kImageTooSmall,
  kInvalidRect,
  kInvalidKernel,
  kRectMismatch,
  kCorruptSecret,
  kNoMatchingRow,
  kAuthFailure,
  kAccessDenied,
  kIntegrityFailure,
  kInvalidPolicy,
  kInvalidChoice,
  kMalformedRequest,
  kConflict,
  kMalformedRecord,
  kNotFound,
  kVariantMismatch,
  kProtocolViolation,
  kExistingKeys,
  kIoError,
};

// Stable upper-snake name used on the wire (e.g. "ACCESS_DENIED").
std::string_view ErrorCodeName(ErrorCode code);

// Inverse of ErrorCodeName; unknown names map to kProtocolViolation.
ErrorCode ErrorCodeFromName(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace photoveil

#endif  // PHOTOVEIL_ERROR_H_
