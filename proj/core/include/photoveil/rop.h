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

#ifndef PHOTOVEIL_ROP_H_
#define PHOTOVEIL_ROP_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "photoveil/bytes.h"
#include "photoveil/image.h"

namespace photoveil {

// Region of privacy. Half-open: covers x0 <= x < x1, y0 <= y < y1.
struct RopRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  std::size_t area() const {
    return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
  }
  bool ValidFor(const GrayImage& img) const {
    return 0 <= x0 && x0 < x1 && x1 <= img.width && 0 <= y0 && y0 < y1 &&
           y1 <= img.height;
  }
  bool operator==(const RopRect&) const = default;
};

// Per-pixel difference between the original ROP and its public rendering.
struct SecretPart {
  RopRect rect;
  std::vector<std::int16_t> offsets;  // row-major over rect

  Bytes Serialize() const;
  // Throws kParseError on malformed input.
  static SecretPart Parse(ByteSpan data);

  bool operator==(const SecretPart&) const = default;
};

struct Separation {
  GrayImage public_image;
  SecretPart secret;
};

enum class SeparationMethod { kMask, kBlur };

// Throws kInvalidRect.
Separation SeparateMask(const GrayImage& img, const RopRect& rect);
// Box filter over the original with edge replication at image borders.
// Throws kInvalidRect or kInvalidKernel (kernel must be odd and >= 3).
Separation SeparateBlur(const GrayImage& img, const RopRect& rect, int kernel);
// Largest odd integer <= max(3, min(width, height) / 4).
int DefaultBlurKernel(const RopRect& rect);

// Bit-exact inverse of both separations. Throws kRectMismatch if the rect
// does not fit the public image and kCorruptSecret for offsets that cannot
// come from an honest separation.
GrayImage Recover(const GrayImage& public_image, const SecretPart& secret);

GrayImage Crop(const GrayImage& img, const RopRect& rect);

// ROP fixture: one `image_id tl_x tl_y br_x br_y` per line; blank lines and
// '#' comments are skipped.
std::map<std::string, RopRect> ParseRopFixture(std::string_view text);
std::map<std::string, RopRect> ReadRopFixture(const std::filesystem::path& path);

}  // namespace photoveil

#endif  // PHOTOVEIL_ROP_H_
