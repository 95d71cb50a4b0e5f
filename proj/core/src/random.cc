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

#include "photoveil/random.h"

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <array>
#include <limits>

#include "photoveil/error.h"

namespace photoveil {

Bytes RandomSource::RandomBytes(std::size_t n) {
  Bytes out(n);
  Fill(out);
  return out;
}

std::uint64_t RandomSource::UniformU64(std::uint64_t bound) {
  if (bound == 0) Fail(ErrorCode::kInvalidArgument, "UniformU64 bound is zero");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::array<std::uint8_t, 8> buf;
    Fill(buf);
    std::uint64_t v = 0;
    for (std::uint8_t b : buf) v = v << 8 | b;
    if (v < limit) return v % bound;
  }
}

bool RandomSource::Coin() {
  std::array<std::uint8_t, 1> b;
  Fill(b);
  return (b[0] & 1) != 0;
}

void OsRandom::Fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    Fail(ErrorCode::kIoError, "RAND_bytes failed");
  }
}

struct SeededRandom::Impl {
  EVP_CIPHER_CTX* ctx = nullptr;
};

namespace {

void InitKeystream(EVP_CIPHER_CTX* ctx, ByteSpan seed) {
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> key;
  SHA256(seed.data(), seed.size(), key.data());
  std::array<std::uint8_t, 16> iv{};
  if (EVP_EncryptInit_ex(ctx, EVP_aes_256_ctr(), nullptr, key.data(),
                         iv.data()) != 1) {
    Fail(ErrorCode::kIoError, "AES-CTR init failed");
  }
}

}  // namespace

SeededRandom::SeededRandom(std::uint64_t seed) : impl_(std::make_unique<Impl>()) {
  std::array<std::uint8_t, 8> buf;
  for (int i = 0; i < 8; ++i) buf[7 - i] = static_cast<std::uint8_t>(seed >> (8 * i));
  impl_->ctx = EVP_CIPHER_CTX_new();
  InitKeystream(impl_->ctx, buf);
}

SeededRandom::SeededRandom(ByteSpan seed) : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_CIPHER_CTX_new();
  InitKeystream(impl_->ctx, seed);
}

SeededRandom::~SeededRandom() { EVP_CIPHER_CTX_free(impl_->ctx); }

void SeededRandom::Fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  std::lock_guard<std::mutex> lock(mu_);
  std::fill(out.begin(), out.end(), 0);
  int len = 0;
  if (EVP_EncryptUpdate(impl_->ctx, out.data(), &len, out.data(),
                        static_cast<int>(out.size())) != 1) {
    Fail(ErrorCode::kIoError, "AES-CTR keystream failed");
  }
}

RandomSource& SystemRandom() {
  static OsRandom instance;
  return instance;
}

std::unique_ptr<RandomSource> MakeRandom(std::optional<std::uint64_t> seed) {
  if (seed) return std::make_unique<SeededRandom>(*seed);
  return std::make_unique<OsRandom>();
}

}  // namespace photoveil
