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

#include "photoveil/rop.h"

#include <algorithm>
#include <array>
#include <sstream>

#include "photoveil/error.h"

namespace photoveil {

namespace {

void RequireRect(const GrayImage& img, const RopRect& rect) {
  if (!rect.ValidFor(img)) {
    std::ostringstream os;
    os << "rect (" << rect.x0 << "," << rect.y0 << ")-(" << rect.x1 << ","
       << rect.y1 << ") invalid for " << img.width << "x" << img.height
       << " image";
    Fail(ErrorCode::kInvalidRect, os.str());
  }
}

// Summed-area table with a zero guard row/column: sat[(y)(w+1) + x] is the
// sum over [0, x) x [0, y).
std::vector<std::uint64_t> SummedArea(const GrayImage& img) {
  const std::size_t w = static_cast<std::size_t>(img.width) + 1;
  std::vector<std::uint64_t> sat(w * (static_cast<std::size_t>(img.height) + 1), 0);
  for (int y = 0; y < img.height; ++y) {
    std::uint64_t row = 0;
    for (int x = 0; x < img.width; ++x) {
      row += img.at(x, y);
      sat[(y + 1) * w + (x + 1)] = sat[y * w + (x + 1)] + row;
    }
  }
  return sat;
}

}  // namespace

Separation SeparateMask(const GrayImage& img, const RopRect& rect) {
  RequireRect(img, rect);
  Separation out{img, {rect, {}}};
  out.secret.offsets.reserve(rect.area());
  for (int y = rect.y0; y < rect.y1; ++y) {
    for (int x = rect.x0; x < rect.x1; ++x) {
      out.secret.offsets.push_back(img.at(x, y));
      out.public_image.at(x, y) = 0;
    }
  }
  return out;
}

int DefaultBlurKernel(const RopRect& rect) {
  int k = std::max(3, std::min(rect.width(), rect.height()) / 4);
  if (k % 2 == 0) --k;
  return k;
}

Separation SeparateBlur(const GrayImage& img, const RopRect& rect, int kernel) {
  RequireRect(img, rect);
  if (kernel < 3 || kernel % 2 == 0) {
    Fail(ErrorCode::kInvalidKernel,
         "blur kernel must be odd and >= 3, got " + std::to_string(kernel));
  }
  const int radius = kernel / 2;
  const std::uint64_t area = static_cast<std::uint64_t>(kernel) * kernel;
  const std::size_t w = static_cast<std::size_t>(img.width) + 1;
  const std::vector<std::uint64_t> sat = SummedArea(img);

  // Sum of a kernel x kernel window with out-of-image taps replicated from the
  // nearest edge pixel: split the window per axis into clamped spans and
  // weight each in-image rectangle by how many taps map onto it.
  auto axis_spans = [radius](int c, int limit) {
    // (begin, end, weight) triples over [0, limit).
    std::vector<std::array<int, 3>> spans;
    const int lo = c - radius;
    const int hi = c + radius;  // inclusive
    const int in_lo = std::max(lo, 0);
    const int in_hi = std::min(hi, limit - 1);
    if (lo < 0) spans.push_back({0, 1, -lo});
    spans.push_back({in_lo, in_hi + 1, 1});
    if (hi > limit - 1) spans.push_back({limit - 1, limit, hi - (limit - 1)});
    return spans;
  };
  auto rect_sum = [&](int bx, int ex, int by, int ey) {
    return sat[ey * w + ex] + sat[by * w + bx] - sat[by * w + ex] -
           sat[ey * w + bx];
  };

  Separation out{img, {rect, {}}};
  out.secret.offsets.reserve(rect.area());
  for (int y = rect.y0; y < rect.y1; ++y) {
    const auto ys = axis_spans(y, img.height);
    for (int x = rect.x0; x < rect.x1; ++x) {
      const auto xs = axis_spans(x, img.width);
      std::uint64_t sum = 0;
      for (const auto& [by, ey, wy] : ys) {
        for (const auto& [bx, ex, wx] : xs) {
          sum += rect_sum(bx, ex, by, ey) * static_cast<std::uint64_t>(wx * wy);
        }
      }
      const auto blurred = static_cast<std::uint8_t>((sum + area / 2) / area);
      out.public_image.at(x, y) = blurred;
      out.secret.offsets.push_back(
          static_cast<std::int16_t>(int{img.at(x, y)} - int{blurred}));
    }
  }
  return out;
}

GrayImage Recover(const GrayImage& public_image, const SecretPart& secret) {
  if (!secret.rect.ValidFor(public_image)) {
    Fail(ErrorCode::kRectMismatch, "secret rect does not fit the public image");
  }
  if (secret.offsets.size() != secret.rect.area()) {
    Fail(ErrorCode::kCorruptSecret, "offset count does not match rect area");
  }
  GrayImage out = public_image;
  std::size_t i = 0;
  for (int y = secret.rect.y0; y < secret.rect.y1; ++y) {
    for (int x = secret.rect.x0; x < secret.rect.x1; ++x, ++i) {
      const int offset = secret.offsets[i];
      if (offset < -255 || offset > 255) {
        Fail(ErrorCode::kCorruptSecret,
             "offset " + std::to_string(offset) + " outside [-255, 255]");
      }
      const int v = int{public_image.at(x, y)} + offset;
      if (v < 0 || v > 255) {
        Fail(ErrorCode::kCorruptSecret,
             "recovered pixel " + std::to_string(v) + " outside [0, 255]");
      }
      out.at(x, y) = static_cast<std::uint8_t>(v);
    }
  }
  return out;
}

GrayImage Crop(const GrayImage& img, const RopRect& rect) {
  RequireRect(img, rect);
  GrayImage out(rect.width(), rect.height());
  for (int y = 0; y < rect.height(); ++y) {
    for (int x = 0; x < rect.width(); ++x) {
      out.at(x, y) = img.at(rect.x0 + x, rect.y0 + y);
    }
  }
  return out;
}

Bytes SecretPart::Serialize() const {
  ByteWriter w;
  w.U32(static_cast<std::uint32_t>(rect.x0));
  w.U32(static_cast<std::uint32_t>(rect.y0));
  w.U32(static_cast<std::uint32_t>(rect.x1));
  w.U32(static_cast<std::uint32_t>(rect.y1));
  w.U32(static_cast<std::uint32_t>(offsets.size()));
  for (std::int16_t o : offsets) {
    const auto u = static_cast<std::uint16_t>(o);
    w.U8(static_cast<std::uint8_t>(u >> 8));
    w.U8(static_cast<std::uint8_t>(u));
  }
  return w.Take();
}

SecretPart SecretPart::Parse(ByteSpan data) {
  ByteReader r(data);
  SecretPart s;
  s.rect.x0 = static_cast<int>(r.U32());
  s.rect.y0 = static_cast<int>(r.U32());
  s.rect.x1 = static_cast<int>(r.U32());
  s.rect.y1 = static_cast<int>(r.U32());
  const std::uint32_t count = r.U32();
  if (s.rect.x1 <= s.rect.x0 || s.rect.y1 <= s.rect.y0 || s.rect.x0 < 0 ||
      s.rect.y0 < 0 || count != s.rect.area()) {
    Fail(ErrorCode::kParseError, "secret part header inconsistent");
  }
  ByteSpan raw = r.Raw(2 * static_cast<std::size_t>(count));
  s.offsets.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    s.offsets[i] = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(raw[2 * i] << 8 | raw[2 * i + 1]));
  }
  r.ExpectDone();
  return s;
}

std::map<std::string, RopRect> ParseRopFixture(std::string_view text) {
  std::map<std::string, RopRect> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) continue;
    RopRect r;
    std::string extra;
    if (!(fields >> r.x0 >> r.y0 >> r.x1 >> r.y1) || (fields >> extra)) {
      Fail(ErrorCode::kParseError,
           "rop fixture line " + std::to_string(lineno) +
               ": expected `image_id tl_x tl_y br_x br_y`");
    }
    out[id] = r;
  }
  return out;
}

std::map<std::string, RopRect> ReadRopFixture(const std::filesystem::path& path) {
  const Bytes data = ReadFileBytes(path);
  return ParseRopFixture(AsString(data));
}

}  // namespace photoveil
