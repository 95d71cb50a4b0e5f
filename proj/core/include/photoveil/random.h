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

#ifndef PHOTOVEIL_RANDOM_H_
#define PHOTOVEIL_RANDOM_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>

#include "photoveil/bytes.h"

namespace photoveil {

// Source of protocol randomness. Implementations are thread-safe.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void Fill(std::span<std::uint8_t> out) = 0;

  Bytes RandomBytes(std::size_t n);
  // Uniform in [0, bound); bound must be positive.
  std::uint64_t UniformU64(std::uint64_t bound);
  bool Coin();
};

// OS entropy via the OpenSSL DRBG.
class OsRandom final : public RandomSource {
 public:
  void Fill(std::span<std::uint8_t> out) override;
};

// Deterministic AES-256-CTR keystream keyed by SHA-256 of the seed. Used for
// reproducible test runs and the CLI --seed flag.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed);
  explicit SeededRandom(ByteSpan seed);
  ~SeededRandom() override;

  SeededRandom(const SeededRandom&) = delete;
  SeededRandom& operator=(const SeededRandom&) = delete;

  void Fill(std::span<std::uint8_t> out) override;

 private:
  struct Impl;
  std::mutex mu_;
  std::unique_ptr<Impl> impl_;
};

// Process-wide OS entropy source.
RandomSource& SystemRandom();

std::unique_ptr<RandomSource> MakeRandom(std::optional<std::uint64_t> seed);

}  // namespace photoveil

#endif  // PHOTOVEIL_RANDOM_H_
