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

#ifndef PHOTOVEIL_TOOLS_CLI_CONFIG_H_
#define PHOTOVEIL_TOOLS_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace photoveil::cli {

// Flat key=value settings. Lines are `key = value`; '#' starts a comment;
// values may be wrapped in double quotes.
class Config {
 public:
  static Config Parse(std::string_view text);
  // Throws kIoError if the file cannot be read.
  static Config Load(const std::filesystem::path& path);

  std::optional<std::string> Get(const std::string& key) const;
  std::string GetOr(const std::string& key, const std::string& fallback) const;
  std::uint64_t GetUint(const std::string& key, std::uint64_t fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  void Set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

// "host:port" or ":port" (host defaults to 127.0.0.1). Throws
// kInvalidArgument.
Endpoint ParseEndpoint(std::string_view text);

}  // namespace photoveil::cli

#endif  // PHOTOVEIL_TOOLS_CLI_CONFIG_H_
