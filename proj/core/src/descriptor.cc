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

#include "photoveil/descriptor.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "photoveil/error.h"

namespace photoveil {

std::string_view VariantName(Variant v) {
  return v == Variant::kReal ? "real" : "binary";
}

Variant ParseVariant(std::string_view name) {
  if (name == "real") return Variant::kReal;
  if (name == "binary" || name == "bin") return Variant::kBinary;
  Fail(ErrorCode::kInvalidArgument, "unknown variant '" + std::string(name) + "'");
}

FeatureVector FeatureVector::Real(std::vector<double> values) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "empty feature vector");
  FeatureVector v;
  v.variant_ = Variant::kReal;
  v.values_ = std::move(values);
  return v;
}

FeatureVector FeatureVector::Binary(std::vector<std::uint8_t> bits) {
  if (bits.empty()) Fail(ErrorCode::kInvalidArgument, "empty feature vector");
  for (std::uint8_t b : bits) {
    if (b > 1) Fail(ErrorCode::kInvalidArgument, "binary vector entry not 0/1");
  }
  FeatureVector v;
  v.variant_ = Variant::kBinary;
  v.bits_ = std::move(bits);
  return v;
}

const std::vector<double>& FeatureVector::values() const {
  if (variant_ != Variant::kReal) {
    Fail(ErrorCode::kVariantMismatch, "binary vector has no real values");
  }
  return values_;
}

const std::vector<std::uint8_t>& FeatureVector::bits() const {
  if (variant_ != Variant::kBinary) {
    Fail(ErrorCode::kVariantMismatch, "real vector has no bits");
  }
  return bits_;
}

Descriptor::Descriptor(std::vector<FeatureVector> vectors)
    : vectors_(std::move(vectors)) {
  if (vectors_.empty()) Fail(ErrorCode::kInvalidArgument, "empty descriptor");
  for (const FeatureVector& v : vectors_) {
    if (v.variant() != vectors_.front().variant() ||
        v.dim() != vectors_.front().dim()) {
      Fail(ErrorCode::kDimMismatch, "descriptor vectors are not homogeneous");
    }
  }
}

void MatchThreshold::Validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
}

namespace {

void RequireSameShape(const FeatureVector& x, const FeatureVector& y,
                      Variant variant) {
  if (x.variant() != variant || y.variant() != variant) {
    Fail(ErrorCode::kVariantMismatch,
         std::string("expected ") + std::string(VariantName(variant)) + " vectors");
  }
  if (x.dim() != y.dim()) {
    Fail(ErrorCode::kDimMismatch, "vector dimensions differ (" +
                                      std::to_string(x.dim()) + " vs " +
                                      std::to_string(y.dim()) + ")");
  }
}

// Indices of the smallest and second-smallest entries (lowest index on ties).
template <typename T>
std::pair<std::size_t, std::size_t> TwoNearest(std::span<const T> d) {
  std::size_t nn = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] < d[nn]) nn = i;
  }
  std::size_t second = nn == 0 ? 1 : 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i != nn && d[i] < d[second]) second = i;
  }
  return {nn, second};
}

}  // namespace

double EuclidSq(const FeatureVector& x, const FeatureVector& y) {
  RequireSameShape(x, y, Variant::kReal);
  double s = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const double d = x.values()[k] - y.values()[k];
    s += d * d;
  }
  return s;
}

BigInt EuclidSqFixed(const FeatureVector& x, const FeatureVector& y,
                     const FixedPointParams& params) {
  RequireSameShape(x, y, Variant::kReal);
  BigInt s = 0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const BigInt d = BigInt(static_cast<long>(EncodeFixed(x.values()[k], params))) -
                     BigInt(static_cast<long>(EncodeFixed(y.values()[k], params)));
    s += d * d;
  }
  return s;
}

std::uint64_t Hamming(const FeatureVector& x, const FeatureVector& y) {
  RequireSameShape(x, y, Variant::kBinary);
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < x.dim(); ++k) s += x.bits()[k] ^ y.bits()[k];
  return s;
}

MatchResult RatioTest(std::span<const double> sq_dists, MatchThreshold alpha) {
  alpha.Validate();
  if (sq_dists.empty()) Fail(ErrorCode::kInvalidArgument, "no candidates");
  if (sq_dists.size() == 1) return {sq_dists[0] == 0.0, 0};
  const auto [nn, second] = TwoNearest(sq_dists);
  const double d_nn = sq_dists[nn];
  const double d_2nn = sq_dists[second];
  if (d_nn == 0.0 && d_2nn == 0.0) return {true, nn};
  const long double a = alpha.alpha;
  return {static_cast<long double>(d_nn) < a * a * d_2nn, nn};
}

MatchResult RatioTest(std::span<const BigInt> sq_dists, MatchThreshold alpha) {
  alpha.Validate();
  if (sq_dists.empty()) Fail(ErrorCode::kInvalidArgument, "no candidates");
  if (sq_dists.size() == 1) return {sq_dists[0] == 0, 0};
  const auto [nn, second] = TwoNearest(sq_dists);
  const BigInt& d_nn = sq_dists[nn];
  const BigInt& d_2nn = sq_dists[second];
  if (d_nn == 0 && d_2nn == 0) return {true, nn};
  // A double is a dyadic rational, so alpha^2 is exact as a GMP rational.
  const mpq_class a(alpha.alpha);
  const mpq_class rhs = a * a * mpq_class(d_2nn);
  return {mpq_class(d_nn) < rhs, nn};
}

MatchResult RatioMatch(const FeatureVector& x, const Descriptor& y,
                       MatchThreshold alpha) {
  if (x.variant() == Variant::kReal) {
    std::vector<double> d;
    d.reserve(y.size());
    for (const FeatureVector& v : y.vectors()) d.push_back(EuclidSq(x, v));
    return RatioTest(std::span<const double>(d), alpha);
  }
  std::vector<BigInt> d;
  d.reserve(y.size());
  for (const FeatureVector& v : y.vectors()) {
    d.emplace_back(static_cast<unsigned long>(Hamming(x, v)));
  }
  return RatioTest(std::span<const BigInt>(d), alpha);
}

int Similarity(const Descriptor& x_set, const Descriptor& y_set,
               MatchThreshold alpha) {
  int score = 0;
  for (const FeatureVector& x : x_set.vectors()) {
    if (RatioMatch(x, y_set, alpha).is_match) ++score;
  }
  return score;
}

std::vector<ScoredImage> RankTopK(std::vector<ScoredImage> scores,
                                  std::size_t k) {
  if (k > scores.size()) {
    Fail(ErrorCode::kOutOfRange, "k = " + std::to_string(k) + " exceeds " +
                                     std::to_string(scores.size()) + " scores");
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const ScoredImage& a, const ScoredImage& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.image_id < b.image_id;
                   });
  scores.resize(k);
  return scores;
}

Descriptor ToyExtract(const GrayImage& img, int grid, Variant variant) {
  if (grid < 1) Fail(ErrorCode::kInvalidArgument, "grid must be >= 1");
  if (img.empty() || img.width < grid || img.height < grid) {
    Fail(ErrorCode::kImageTooSmall,
         "image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
             " too small for a " + std::to_string(grid) + "x" +
             std::to_string(grid) + " grid");
  }
  std::vector<FeatureVector> out;
  out.reserve(static_cast<std::size_t>(grid) * grid);
  for (int gy = 0; gy < grid; ++gy) {
    const int y0 = gy * img.height / grid;
    const int y1 = (gy + 1) * img.height / grid;
    for (int gx = 0; gx < grid; ++gx) {
      const int x0 = gx * img.width / grid;
      const int x1 = (gx + 1) * img.width / grid;
      std::vector<double> hist(kToyDim, 0.0);
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) hist[img.at(x, y) * kToyDim / 256] += 1.0;
      }
      double norm = 0.0;
      for (double h : hist) norm += h * h;
      norm = std::sqrt(norm);
      for (double& h : hist) h /= norm;

      if (variant == Variant::kReal) {
        out.push_back(FeatureVector::Real(std::move(hist)));
      } else {
        std::vector<double> sorted = hist;
        std::nth_element(sorted.begin(), sorted.begin() + kToyDim / 2,
                         sorted.end());
        const double median = sorted[kToyDim / 2];
        std::vector<std::uint8_t> bits(kToyDim);
        for (std::size_t k = 0; k < kToyDim; ++k) bits[k] = hist[k] > median;
        out.push_back(FeatureVector::Binary(std::move(bits)));
      }
    }
  }
  return Descriptor(std::move(out));
}

std::string FormatDescriptor(const Descriptor& d) {
  std::ostringstream os;
  os << VariantName(d.variant()) << ' ' << d.dim() << ' ' << d.size() << '\n';
  for (const FeatureVector& v : d.vectors()) {
    if (v.variant() == Variant::kBinary) {
      for (std::uint8_t b : v.bits()) os << static_cast<char>('0' + b);
    } else {
      // Shortest round-trip representation keeps write-then-read lossless.
      char buf[32];
      for (std::size_t k = 0; k < v.dim(); ++k) {
        auto res = std::to_chars(buf, buf + sizeof buf, v.values()[k]);
        if (k) os << ' ';
        os.write(buf, res.ptr - buf);
      }
    }
    os << '\n';
  }
  return os.str();
}

namespace {

[[noreturn]] void DescriptorParseError(int line, std::size_t offset,
                                       const std::string& what) {
  Fail(ErrorCode::kParseError, "descriptor line " + std::to_string(line) +
                                   ", offset " + std::to_string(offset) + ": " +
                                   what);
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::pair<std::string_view, std::size_t>> Fields(std::string_view line) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start), start);
  }
  return out;
}

std::size_t ParseCount(std::string_view field, int line, std::size_t offset,
                       const char* what) {
  std::size_t v = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || v == 0) {
    DescriptorParseError(line, offset, std::string("invalid ") + what + " '" +
                                           std::string(field) + "'");
  }
  return v;
}

}  // namespace

Descriptor ParseDescriptor(std::string_view text) {
  const auto lines = SplitLines(text);
  if (lines.empty()) DescriptorParseError(1, 0, "missing header");
  const auto header = Fields(lines[0]);
  if (header.size() != 3) {
    DescriptorParseError(1, 0, "header must be `variant dim count`");
  }
  Variant variant;
  if (header[0].first == "real") {
    variant = Variant::kReal;
  } else if (header[0].first == "binary") {
    variant = Variant::kBinary;
  } else {
    DescriptorParseError(1, header[0].second,
                         "unknown variant '" + std::string(header[0].first) + "'");
  }
  const std::size_t dim = ParseCount(header[1].first, 1, header[1].second, "dim");
  const std::size_t count =
      ParseCount(header[2].first, 1, header[2].second, "count");
  if (lines.size() < count + 1) {
    DescriptorParseError(static_cast<int>(lines.size()) + 1, 0,
                         "expected " + std::to_string(count) + " vectors");
  }
  for (std::size_t i = count + 1; i < lines.size(); ++i) {
    if (!Fields(lines[i]).empty()) {
      DescriptorParseError(static_cast<int>(i) + 1, 0, "unexpected trailing data");
    }
  }

  std::vector<FeatureVector> vectors;
  vectors.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int lineno = static_cast<int>(i) + 2;
    const auto fields = Fields(lines[i + 1]);
    if (variant == Variant::kBinary) {
      if (fields.size() != 1 || fields[0].first.size() != dim) {
        DescriptorParseError(lineno, 0,
                             "expected a " + std::to_string(dim) + "-bit string");
      }
      std::vector<std::uint8_t> bits(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        const char c = fields[0].first[k];
        if (c != '0' && c != '1') {
          DescriptorParseError(lineno, fields[0].second + k, "bit must be 0 or 1");
        }
        bits[k] = static_cast<std::uint8_t>(c - '0');
      }
      vectors.push_back(FeatureVector::Binary(std::move(bits)));
    } else {
      if (fields.size() != dim) {
        DescriptorParseError(lineno, 0,
                             "expected " + std::to_string(dim) + " values, got " +
                                 std::to_string(fields.size()));
      }
      std::vector<double> values(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        const auto [field, offset] = fields[k];
        auto res = std::from_chars(field.data(), field.data() + field.size(), values[k]);
        if (res.ec != std::errc() || res.ptr != field.data() + field.size() ||
            !std::isfinite(values[k])) {
          DescriptorParseError(lineno, offset,
                               "invalid number '" + std::string(field) + "'");
        }
      }
      vectors.push_back(FeatureVector::Real(std::move(values)));
    }
  }
  return Descriptor(std::move(vectors));
}

Descriptor ReadDescriptor(const std::filesystem::path& path) {
  const Bytes data = ReadFileBytes(path);
  return ParseDescriptor(AsString(data));
}

void WriteDescriptor(const std::filesystem::path& path, const Descriptor& d) {
  const std::string text = FormatDescriptor(d);
  WriteFileBytes(path, AsBytes(text));
}

}  // namespace photoveil
