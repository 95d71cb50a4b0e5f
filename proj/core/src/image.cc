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

#include "photoveil/image.h"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "photoveil/error.h"

namespace photoveil {

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h),
      pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(ByteSpan data) : data_(data) {}

  void SkipSpaceAndComments() {
    while (pos_ < data_.size()) {
      const char c = static_cast<char>(data_[pos_]);
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long Number(const char* what) {
    SkipSpaceAndComments();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      v = v * 10 + (data_[pos_] - '0');
      if (v > 1'000'000) Fail(ErrorCode::kParseError, std::string("PGM ") + what + " too large");
      ++pos_;
    }
    if (pos_ == start) {
      Fail(ErrorCode::kParseError, std::string("PGM: expected ") + what +
                                       " at offset " + std::to_string(start));
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void Advance() { ++pos_; }

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage DecodePgm(ByteSpan data) {
  if (data.size() < 2 || data[0] != 'P') {
    Fail(ErrorCode::kParseError, "not a PNM file");
  }
  if (data[1] != '5') {
    Fail(ErrorCode::kUnsupportedFormat,
         std::string("unsupported PNM type P") + static_cast<char>(data[1]) +
             " (only binary P5 grayscale)");
  }
  HeaderScanner scan(data.subspan(2));
  const long w = scan.Number("width");
  const long h = scan.Number("height");
  const long maxval = scan.Number("maxval");
  if (w <= 0 || h <= 0) Fail(ErrorCode::kParseError, "PGM has empty dimensions");
  if (maxval != 255) {
    Fail(ErrorCode::kUnsupportedFormat,
         "unsupported PGM maxval " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the raster.
  const std::size_t raster = 2 + scan.pos() + 1;
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (raster > data.size() || data.size() - raster < need) {
    Fail(ErrorCode::kParseError, "PGM raster truncated");
  }
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(raster), need,
              img.pixels.begin());
  return img;
}

Bytes EncodePgm(const GrayImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

Bytes ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::filesystem::path& path, ByteSpan data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) Fail(ErrorCode::kIoError, "short write to " + path.string());
}

GrayImage ReadPgm(const std::filesystem::path& path) {
  return DecodePgm(ReadFileBytes(path));
}

void WritePgm(const std::filesystem::path& path, const GrayImage& img) {
  WriteFileBytes(path, EncodePgm(img));
}

}  // namespace photoveil
