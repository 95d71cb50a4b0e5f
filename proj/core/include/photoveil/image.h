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

#ifndef PHOTOVEIL_IMAGE_H_
#define PHOTOVEIL_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "photoveil/bytes.h"

namespace photoveil {

// 8-bit grayscale, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool empty() const { return pixels.empty(); }

  bool operator==(const GrayImage&) const = default;
};

// Binary PGM (P5) with maxval 255. Header comments are accepted on read.
// Throws kUnsupportedFormat for other magic numbers or maxvals and
// kParseError for malformed headers or truncated rasters.
GrayImage DecodePgm(ByteSpan data);
Bytes EncodePgm(const GrayImage& img);

GrayImage ReadPgm(const std::filesystem::path& path);
void WritePgm(const std::filesystem::path& path, const GrayImage& img);

// Whole-file helpers; throw kIoError.
Bytes ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, ByteSpan data);

}  // namespace photoveil

#endif  // PHOTOVEIL_IMAGE_H_
