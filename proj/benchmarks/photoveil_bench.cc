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

#include <map>
#include <vector>

#include <benchmark/benchmark.h>

#include "photoveil/access.h"
#include "photoveil/descriptor.h"
#include "photoveil/ot.h"
#include "photoveil/paillier.h"
#include "photoveil/random.h"
#include "photoveil/rop.h"
#include "photoveil/search_bin.h"
#include "photoveil/search_real.h"

namespace photoveil {
namespace {

FeatureVector RealVector(RandomSource& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = static_cast<double>(rng.UniformU64(2001)) / 1000.0 - 1.0;
  return FeatureVector::Real(std::move(v));
}

FeatureVector BitVector(RandomSource& rng, std::size_t dim) {
  std::vector<std::uint8_t> v(dim);
  for (auto& b : v) b = rng.Coin() ? 1 : 0;
  return FeatureVector::Binary(std::move(v));
}

// Keyed by prime bits; 512 is the default deployment size.
const real::SearchKeys& RealKeys(std::size_t bits, std::size_t dim) {
  static std::map<std::pair<std::size_t, std::size_t>, real::SearchKeys> cache;
  auto it = cache.find({bits, dim});
  if (it == cache.end()) {
    SeededRandom rng(bits * 1000 + dim);
    it = cache.emplace(std::make_pair(bits, dim), real::GenerateSearchKeys(dim, bits, rng)).first;
  }
  return it->second;
}

const bin::SearchKeys& BinKeys(std::size_t bits) {
  static std::map<std::size_t, bin::SearchKeys> cache;
  auto it = cache.find(bits);
  if (it == cache.end()) {
    SeededRandom rng(bits);
    it = cache.emplace(bits, bin::GenerateSearchKeys(bits, rng)).first;
  }
  return it->second;
}

void BM_PaillierEncrypt(benchmark::State& state) {
  const auto& keys = RealKeys(state.range(0), 1);
  SeededRandom rng(1);
  const BigInt m = 123456789;
  for (auto _ : state) benchmark::DoNotOptimize(paillier::Encrypt(keys.pk, m, rng));
}
BENCHMARK(BM_PaillierEncrypt)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_PaillierDecrypt(benchmark::State& state) {
  const auto& keys = RealKeys(state.range(0), 1);
  SeededRandom rng(2);
  const auto c = paillier::Encrypt(keys.pk, BigInt(42), rng);
  for (auto _ : state) benchmark::DoNotOptimize(paillier::Decrypt(keys.sk, c));
}
BENCHMARK(BM_PaillierDecrypt)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_RealEncryptVector(benchmark::State& state) {
  const auto& keys = RealKeys(512, state.range(0));
  SeededRandom rng(3);
  const Descriptor d({RealVector(rng, state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(real::OwnerEncryptDescriptor(d, keys, rng));
}
BENCHMARK(BM_RealEncryptVector)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RealEncodeQuery(benchmark::State& state) {
  const auto& keys = RealKeys(512, state.range(0));
  SeededRandom rng(4);
  const Descriptor d({RealVector(rng, state.range(0))});
  for (auto _ : state)
    benchmark::DoNotOptimize(real::QuerierEncode(d, keys.pk, keys.r, keys.fixed, rng));
}
BENCHMARK(BM_RealEncodeQuery)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RealCloudDistance(benchmark::State& state) {
  const auto& keys = RealKeys(512, state.range(0));
  SeededRandom rng(5);
  const auto bag = real::OwnerEncryptDescriptor(Descriptor({RealVector(rng, state.range(0))}), keys, rng);
  const auto q = real::QuerierEncode(Descriptor({RealVector(rng, state.range(0))}), keys.pk,
                                     keys.r, keys.fixed, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(real::CloudDistance(bag.vectors[0], q.vectors[0], keys.pk));
}
BENCHMARK(BM_RealCloudDistance)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

// 9 stored x 9 query vectors, the per-image work of one toy query.
void BM_RealDistanceMatrix(benchmark::State& state) {
  const auto& keys = RealKeys(512, 64);
  SeededRandom rng(12);
  std::vector<FeatureVector> xs, ys;
  for (int i = 0; i < 9; ++i) {
    xs.push_back(RealVector(rng, 64));
    ys.push_back(RealVector(rng, 64));
  }
  const auto bag = real::OwnerEncryptDescriptor(Descriptor(xs), keys, rng);
  const auto q = real::QuerierEncode(Descriptor(ys), keys.pk, keys.r, keys.fixed, rng);
  for (auto _ : state) benchmark::DoNotOptimize(real::CloudDistanceMatrix(bag, q));
}
BENCHMARK(BM_RealDistanceMatrix)->Unit(benchmark::kMillisecond);

void BM_BinGarbleVector(benchmark::State& state) {
  const auto& keys = BinKeys(512);
  SeededRandom rng(6);
  const FeatureVector x = BitVector(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bin::GarbleVector(x, keys, rng));
}
BENCHMARK(BM_BinGarbleVector)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BinEncodeQuery(benchmark::State& state) {
  const auto& keys = BinKeys(512);
  SeededRandom rng(7);
  const FeatureVector y = BitVector(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bin::EncodeQuery(y, keys));
}
BENCHMARK(BM_BinEncodeQuery)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_BinCloudEval(benchmark::State& state) {
  const auto& keys = BinKeys(512);
  SeededRandom rng(8);
  const auto gates = bin::GarbleVector(BitVector(rng, state.range(0)), keys, rng);
  const auto in = bin::EncodeQuery(BitVector(rng, state.range(0)), keys);
  for (auto _ : state) benchmark::DoNotOptimize(bin::CloudEval(gates, in, keys.pk));
}
BENCHMARK(BM_BinCloudEval)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BlurSeparateRecover(benchmark::State& state) {
  SeededRandom rng(9);
  GrayImage img(640, 480);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.UniformU64(256));
  const RopRect rect{100, 80, 100 + static_cast<int>(state.range(0)),
                     80 + static_cast<int>(state.range(0))};
  for (auto _ : state) {
    const Separation s = SeparateBlur(img, rect, DefaultBlurKernel(rect));
    benchmark::DoNotOptimize(Recover(s.public_image, s.secret));
  }
}
BENCHMARK(BM_BlurSeparateRecover)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PolicyUnwrap(benchmark::State& state) {
  SeededRandom rng(10);
  const access::Authority authority({"friend", "family", "coworker"}, rng);
  const auto env = authority.Wrap(access::ParsePolicy("AND(friend,OR(family,coworker))"),
                                  rng.RandomBytes(64), rng);
  const auto creds = authority.IssueAll("bob", {"friend", "family"});
  for (auto _ : state) benchmark::DoNotOptimize(access::Unwrap(env, creds));
}
BENCHMARK(BM_PolicyUnwrap)->Unit(benchmark::kMicrosecond);

void BM_ObliviousTransfer(benchmark::State& state) {
  SeededRandom rng(11);
  std::vector<Bytes> items;
  for (int i = 0; i < 20; ++i) items.push_back(rng.RandomBytes(1024));
  const ot::Group& g = ot::DefaultGroup();
  const ot::Sender sender(g, items, rng);
  const std::size_t n = state.range(0);
  for (auto _ : state) {
    const ot::Receiver rx(g, ot::MakeChoice({3}, n, items.size(), rng), items.size(), rng);
    benchmark::DoNotOptimize(rx.Finalize(sender.Respond(rx.request(), rng)));
  }
}
BENCHMARK(BM_ObliviousTransfer)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace photoveil

BENCHMARK_MAIN();
