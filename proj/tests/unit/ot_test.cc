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

#include <array>
#include <map>
#include <set>
#include <string>

#include "photoveil/ot.h"
#include "test_util.h"

namespace photoveil::ot {
namespace {

std::vector<Bytes> Items(std::size_t n) {
  std::vector<Bytes> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string s = "item-" + std::to_string(i) + std::string(i % 7, 'x');
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

Bytes ResponseBytes(const OtResponse& r) {
  ByteWriter w;
  w.Blob(ToBytes(r.y_pub));
  for (std::size_t i : r.sigma_prime) w.U32(static_cast<std::uint32_t>(i));
  for (const auto& row : r.key_tables)
    for (const Bytes& b : row) w.Blob(b);
  for (const Bytes& b : r.items) w.Blob(b);
  return w.Take();
}

TEST(OtGroup, DefaultGroupChecks) {
  const Group& g = DefaultGroup();
  EXPECT_NO_THROW(g.Validate());
  EXPECT_EQ(BitLength(g.p), 2048u);
  EXPECT_EQ(BitLength(g.q), 256u);
  EXPECT_EQ(PowMod(g.g, g.q, g.p), 1);
  EXPECT_NE(g.g, 1);
  for (std::size_t i : {0u, 1u, 2u, 999u}) {
    const BigInt h = HashToSubgroup(g, i);
    EXPECT_EQ(PowMod(h, g.q, g.p), 1);
    EXPECT_NE(h, 1);
    EXPECT_TRUE(g.InSubgroup(h));
  }
  EXPECT_NE(HashToSubgroup(g, 0), HashToSubgroup(g, 1));
  EXPECT_FALSE(g.InSubgroup(0));
  EXPECT_FALSE(g.InSubgroup(g.p));
  EXPECT_FALSE(g.InSubgroup(g.p - 1));
}

TEST(OtGroup, ValidateRejectsBadParameters) {
  Group bad = DefaultGroup();
  bad.g = bad.p - 1;
  EXPECT_ERROR_CODE(bad.Validate(), ErrorCode::kInvalidArgument);
  bad = DefaultGroup();
  bad.q += 2;
  EXPECT_ERROR_CODE(bad.Validate(), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE((Group{23, 7, 2}.Validate()), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW((Group{23, 11, 2}.Validate()));
}

TEST(OtChoice, MakeAndValidate) {
  SeededRandom rng(1);
  const OtChoice c = MakeChoice({7, 2}, 8, 20, rng);
  EXPECT_EQ(c.sigma, (std::vector<std::size_t>{7, 2}));
  EXPECT_EQ(c.sigma_prime.size(), 8u);
  EXPECT_TRUE(std::is_sorted(c.sigma_prime.begin(), c.sigma_prime.end()));
  std::set<std::size_t> sp(c.sigma_prime.begin(), c.sigma_prime.end());
  EXPECT_EQ(sp.size(), 8u);
  EXPECT_TRUE(sp.count(7) && sp.count(2));
  EXPECT_ERROR_CODE(MakeChoice({1, 2, 3}, 2, 20, rng), ErrorCode::kInvalidChoice);
  EXPECT_ERROR_CODE(MakeChoice({1}, 21, 20, rng), ErrorCode::kInvalidChoice);
  EXPECT_ERROR_CODE(MakeChoice({1, 1}, 4, 20, rng), ErrorCode::kInvalidChoice);
  EXPECT_ERROR_CODE(MakeChoice({20}, 4, 20, rng), ErrorCode::kInvalidChoice);
  EXPECT_ERROR_CODE((OtChoice{{}, {1, 2}}.Validate(5)), ErrorCode::kInvalidChoice);
  EXPECT_ERROR_CODE((OtChoice{{1}, {2, 1}}.Validate(5)), ErrorCode::kInvalidChoice);
  EXPECT_ERROR_CODE((OtChoice{{3}, {1, 2}}.Validate(5)), ErrorCode::kInvalidChoice);
  EXPECT_ERROR_CODE((OtChoice{{1}, {1, 5}}.Validate(5)), ErrorCode::kInvalidChoice);
  // Padding draws are spread over the whole store.
  std::map<std::size_t, int> hits;
  for (int t = 0; t < 500; ++t)
    for (std::size_t i : MakeChoice({0}, 2, 10, rng).sigma_prime) hits[i]++;
  for (std::size_t i = 1; i < 10; ++i) EXPECT_GT(hits[i], 20) << i;
}

TEST(Ot, Completeness) {
  SeededRandom rng(2);
  const Group& g = DefaultGroup();
  const auto items = Items(20);
  const Sender sender(g, items, rng);
  for (std::size_t k : {1u, 3u}) {
    for (std::size_t n : {4u, 12u, 20u}) {
      std::vector<std::size_t> sigma;
      while (sigma.size() < k) {
        const std::size_t s = rng.UniformU64(20);
        if (std::find(sigma.begin(), sigma.end(), s) == sigma.end()) sigma.push_back(s);
      }
      const Receiver rx(g, MakeChoice(sigma, n, 20, rng), 20, rng);
      const OtResponse resp = sender.Respond(rx.request(), rng);
      const auto got = rx.Finalize(resp);
      ASSERT_EQ(got.size(), k);
      for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(got[j], items[sigma[j]]);
    }
  }
}

TEST(Ot, FullRetrievalWhenKEqualsN) {
  SeededRandom rng(3);
  const auto items = Items(5);
  const Sender sender(DefaultGroup(), items, rng);
  const Receiver rx(DefaultGroup(), MakeChoice({4, 0, 1, 3, 2}, 5, 5, rng), 5, rng);
  EXPECT_EQ(rx.Finalize(sender.Respond(rx.request(), rng)),
            (std::vector<Bytes>{items[4], items[0], items[1], items[3], items[2]}));
}

TEST(Ot, UnchosenItemsStaySealed) {
  SeededRandom rng(4);
  const auto items = Items(20);
  const Sender sender(DefaultGroup(), items, rng);
  const Receiver rx(DefaultGroup(), MakeChoice({5, 11}, 10, 20, rng), 20, rng);
  const OtResponse resp = sender.Respond(rx.request(), rng);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t idx : rx.choice().sigma_prime) {
      if (idx == rx.choice().sigma[j]) {
        EXPECT_EQ(rx.Open(resp, j, idx), items[idx]);
      } else {
        EXPECT_ERROR_CODE(rx.Open(resp, j, idx), ErrorCode::kIntegrityFailure);
      }
    }
  }
}

TEST(Ot, SenderTranscriptIndependentOfChoice) {
  // Trapdoor bases h_i = g^{t_i}: choosing sigma with r = rho - t_sigma gives
  // B = g^rho for every sigma, so the request is the same element. With the
  // sender's randomness fixed, its whole transcript must then be identical.
  const Group& g = DefaultGroup();
  SeededRandom trap_rng(5);
  std::vector<BigInt> t(12);
  for (BigInt& ti : t) ti = RandomBelow(trap_rng, g.q);
  const ItemBases trapdoor = [&g, &t](std::size_t i) { return PowMod(g.g, t.at(i), g.p); };
  const BigInt rho = RandomBelow(trap_rng, g.q);
  const auto items = Items(12);
  const std::vector<std::size_t> sp = {1, 4, 6, 9};

  std::vector<Bytes> requests, transcripts;
  for (std::size_t sigma : sp) {
    const BigInt r = ((rho - t[sigma]) % g.q + g.q) % g.q;
    const Receiver rx(g, OtChoice{{sigma}, sp}, 12, std::vector<BigInt>{r}, trapdoor);
    requests.push_back(ToBytes(rx.request().blinded[0]));
    SeededRandom sender_rng(77);
    const Sender sender(g, items, sender_rng, trapdoor);
    const OtResponse resp = sender.Respond(rx.request(), sender_rng);
    transcripts.push_back(ResponseBytes(resp));
    EXPECT_EQ(rx.Finalize(resp)[0], items[sigma]);
  }
  for (std::size_t i = 1; i < sp.size(); ++i) {
    EXPECT_EQ(requests[i], requests[0]);
    EXPECT_EQ(transcripts[i], transcripts[0]);
  }
}

TEST(Ot, RequestsForDifferentIndicesLookAlike) {
  // Two-sample chi-square on B mod 16 for index 0 vs index 1, 1000 each.
  // 15 degrees of freedom; 37.7 is the 0.999 quantile.
  SeededRandom rng(6);
  const Group& g = DefaultGroup();
  std::array<std::array<double, 16>, 2> bins{};
  for (int idx = 0; idx < 2; ++idx) {
    for (int t = 0; t < 1000; ++t) {
      const Receiver rx(g, OtChoice{{static_cast<std::size_t>(idx)}, {0, 1}}, 2, rng);
      const BigInt b = rx.request().blinded[0];
      EXPECT_TRUE(g.InSubgroup(b));
      bins[idx][BigInt(b % 16).get_ui()] += 1;
    }
  }
  double chi2 = 0;
  for (int b = 0; b < 16; ++b) {
    const double s = bins[0][b] + bins[1][b];
    if (s > 0) chi2 += (bins[0][b] - bins[1][b]) * (bins[0][b] - bins[1][b]) / s;
  }
  EXPECT_LT(chi2, 37.7);
}

TEST(Ot, ItemKeysAreDistinct) {
  SeededRandom rng(7);
  const Sender sender(DefaultGroup(), Items(1000), rng);
  std::set<SymmetricKey> keys;
  for (std::size_t i = 0; i < 1000; ++i) keys.insert(sender.item_key(i));
  EXPECT_EQ(keys.size(), 1000u);
}

TEST(Ot, SenderRejectsMalformedRequests) {
  SeededRandom rng(8);
  const Group& g = DefaultGroup();
  const Sender sender(g, Items(6), rng);
  const Receiver rx(g, OtChoice{{2}, {1, 2, 3}}, 6, rng);
  OtRequest req = rx.request();
  req.blinded[0] = g.p - 1;
  EXPECT_ERROR_CODE(sender.Respond(req, rng), ErrorCode::kMalformedRequest);
  req.blinded[0] = 0;
  EXPECT_ERROR_CODE(sender.Respond(req, rng), ErrorCode::kMalformedRequest);
  req = rx.request();
  req.sigma_prime = {3, 1, 2};
  EXPECT_ERROR_CODE(sender.Respond(req, rng), ErrorCode::kMalformedRequest);
  req = rx.request();
  req.sigma_prime = {1, 2, 6};
  EXPECT_ERROR_CODE(sender.Respond(req, rng), ErrorCode::kNotFound);
  req = rx.request();
  req.blinded = {req.blinded[0], req.blinded[0], req.blinded[0], req.blinded[0]};
  EXPECT_ERROR_CODE(sender.Respond(req, rng), ErrorCode::kMalformedRequest);
  req.blinded.clear();
  EXPECT_ERROR_CODE(sender.Respond(req, rng), ErrorCode::kMalformedRequest);
}

TEST(Ot, TamperedResponse) {
  SeededRandom rng(9);
  const Sender sender(DefaultGroup(), Items(6), rng);
  const Receiver rx(DefaultGroup(), OtChoice{{2}, {1, 2, 3}}, 6, rng);
  OtResponse resp = sender.Respond(rx.request(), rng);
  OtResponse bad_item = resp;
  bad_item.items[1][20] ^= 1;
  EXPECT_ERROR_CODE(rx.Finalize(bad_item), ErrorCode::kIntegrityFailure);
  OtResponse bad_key = resp;
  bad_key.key_tables[0][1][15] ^= 1;
  EXPECT_ERROR_CODE(rx.Finalize(bad_key), ErrorCode::kIntegrityFailure);
  OtResponse shuffled = resp;
  std::swap(shuffled.items[0], shuffled.items[1]);
  EXPECT_ERROR_CODE(rx.Finalize(shuffled), ErrorCode::kIntegrityFailure);
  OtResponse wrong_sp = resp;
  wrong_sp.sigma_prime = {1, 2, 4};
  EXPECT_ERROR_CODE(rx.Finalize(wrong_sp), ErrorCode::kProtocolViolation);
}

}  // namespace
}  // namespace photoveil::ot
