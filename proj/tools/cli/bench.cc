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

#include "cli/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>

#include "photoveil/error.h"
#include "photoveil/search_bin.h"
#include "photoveil/search_real.h"

namespace photoveil::cli {

namespace {

BenchRow Time(const char* op, const BenchOptions& opts,
              const std::function<void()>& body) {
  std::vector<double> ms;
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
  return {op, opts.variant, opts.dim, mean, *std::min_element(ms.begin(), ms.end()),
          *std::max_element(ms.begin(), ms.end())};
}

FeatureVector RandomVector(Variant v, std::size_t dim, RandomSource& rng) {
  if (v == Variant::kReal) {
    std::vector<double> x(dim);
    for (double& e : x) e = static_cast<double>(rng.UniformU64(2000001)) / 1e6 - 1.0;
    return FeatureVector::Real(std::move(x));
  }
  std::vector<std::uint8_t> bits(dim);
  for (auto& b : bits) b = rng.Coin() ? 1 : 0;
  return FeatureVector::Binary(std::move(bits));
}

}  // namespace

std::vector<BenchRow> RunBench(const BenchOptions& opts, RandomSource& rng) {
  if (opts.trials == 0 || opts.dim == 0) {
    Fail(ErrorCode::kInvalidArgument, "bench needs trials >= 1 and dim >= 1");
  }
  const FeatureVector x = RandomVector(opts.variant, opts.dim, rng);
  const FeatureVector y = RandomVector(opts.variant, opts.dim, rng);
  const Descriptor xs({x});
  const Descriptor ys({y});
  std::vector<BenchRow> rows;
  if (opts.variant == Variant::kReal) {
    const real::SearchKeys keys = real::GenerateSearchKeys(opts.dim, opts.prime_bits, rng);
    real::SearchBag bag;
    real::QueryEncoding query;
    paillier::Ciphertext dist;
    rows.push_back(Time(kOpEncryptVector, opts,
                        [&] { bag = real::OwnerEncryptDescriptor(xs, keys, rng); }));
    rows.push_back(Time(kOpEncodeVector, opts, [&] {
      query = real::QuerierEncode(ys, keys.pk, keys.r, keys.fixed, rng);
    }));
    rows.push_back(Time(kOpCloudDistance, opts, [&] {
      dist = real::CloudDistance(bag.vectors[0], query.vectors[0], keys.pk);
    }));
    rows.push_back(Time(kOpDecryptDistance, opts, [&] {
      FromResidue(paillier::Decrypt(keys.sk, dist), keys.pk.n());
    }));
  } else {
    const bin::SearchKeys keys = bin::GenerateSearchKeys(opts.prime_bits, rng);
    bin::GarbledVector gates;
    bin::GarbledInput input;
    paillier::Ciphertext dist;
    rows.push_back(Time(kOpEncryptVector, opts,
                        [&] { gates = bin::GarbleVector(x, keys, rng); }));
    rows.push_back(Time(kOpEncodeVector, opts, [&] { input = bin::EncodeQuery(y, keys); }));
    rows.push_back(Time(kOpCloudDistance, opts,
                        [&] { dist = bin::CloudEval(gates, input, keys.pk); }));
    rows.push_back(Time(kOpDecryptDistance, opts, [&] {
      FromResidue(paillier::Decrypt(keys.sk, dist), keys.pk.n());
    }));
  }
  return rows;
}

std::string BenchCsvHeader() { return "operation,variant,dim,mean_ms,min_ms,max_ms"; }

std::string FormatBenchRow(const BenchRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.4f,%.4f,%.4f", row.operation.c_str(),
                std::string(VariantName(row.variant)).c_str(), row.dim, row.mean_ms,
                row.min_ms, row.max_ms);
  return buf;
}

}  // namespace photoveil::cli
