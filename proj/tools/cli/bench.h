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

#ifndef PHOTOVEIL_TOOLS_CLI_BENCH_H_
#define PHOTOVEIL_TOOLS_CLI_BENCH_H_

#include <cstddef>
#include <string>
#include <vector>

#include "photoveil/descriptor.h"
#include "photoveil/random.h"

namespace photoveil::cli {

struct BenchOptions {
  Variant variant = Variant::kReal;
  std::size_t dim = 64;
  std::size_t trials = 5;
  std::size_t prime_bits = 512;
};

struct BenchRow {
  std::string operation;
  Variant variant = Variant::kReal;
  std::size_t dim = 0;
  double mean_ms = 0;
  double min_ms = 0;
  double max_ms = 0;
};

inline constexpr const char* kOpEncryptVector = "Encrypt Vector (owner)";
inline constexpr const char* kOpEncodeVector = "Encode Vector (querier)";
inline constexpr const char* kOpCloudDistance = "Cloud Distance (pair)";
inline constexpr const char* kOpDecryptDistance = "Decrypt Distance";

// Times one vector per trial for each of the four per-vector operations,
// on random vectors (uniform in [-1, 1] or fair bits).
std::vector<BenchRow> RunBench(const BenchOptions& options, RandomSource& rng);

std::string BenchCsvHeader();
std::string FormatBenchRow(const BenchRow& row);

}  // namespace photoveil::cli

#endif  // PHOTOVEIL_TOOLS_CLI_BENCH_H_
