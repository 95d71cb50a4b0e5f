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

#include "photoveil/ot.h"

#include <algorithm>
#include <set>
#include <string>

#include "photoveil/error.h"

namespace photoveil::ot {

namespace {

// Output of tools/gen_ot_group.py.
constexpr const char* kGroupP =
    "d5df8d7f1868695fac314b1bff8a7af1dd80cb57f4bb74acd2345dd691939fcb"
    "ed125c34ff0380e6fe58f2f2b4bbfc64c81c0535591b21624f9beefb099ca097"
    "543e0701c54844b5ad8bc951b0e1b3bb144eb1f4f11c682bbd1513838e06eefb"
    "280dec19215ca6ddf6d6f319702d40c137ac55e7d0f3b9991153c7301a2786b1"
    "eb10aadd929d11ca899eebf82158f46a7ac4a4267ec04c3ff8b6d59624ccaf3f"
    "2274b0dda52a4651d3f898958d4a41e5ea6d21fe7e393743966e5aa6454d7421"
    "0bbdcf0e73b93bf6aa9e24fdf1109d84ce94a1297408d15e85d58655699d1731"
    "98516de856ce45349e827ae3cbaddc451126b926bc33de1d8ec1ac2a513334fd";
constexpr const char* kGroupQ =
    "d9340199b91695ecee514395a8100758f75acc736437cc65d400d3660b271d8f";
constexpr const char* kGroupG =
    "d3b49b2c79b3a9ef3dac1b5e581df76ad57b16b3504fb452c57a147989b2fdca"
    "9a6c5620035384525f4f11ece9c93864f9ff7ab8503f9551f6ed4c5fab9e0dd0"
    "1b583fbce1f9748af1fd10055fb63bddbb58370fe3d6362a83e01bab230ff934"
    "e860a9e43c119d5e77fd9557636124d2f5b1cc0a8e076a317fad202f37feac5f"
    "23c8caed168482146a6527405038e29699b9789dc827b0d5c7e549972e3cf6b2"
    "ea5bb397eada6a719d8b4a8a93604b2b8c6bc04ea10504565ce3492eba257ed8"
    "630793399bc882554523c4164b77d093ae1626ceb61dcf712b01a1cbbd463874"
    "8beb00c5b9b9e9bc98b90c88427124a02ccc4cc619e0db7f87de73fb51d10105";

SymmetricKey RequestKey(const Group& group, const BigInt& shared, std::size_t index) {
  ByteWriter w;
  w.Raw(ToBytes(shared, group.element_bytes()));
  w.U32(static_cast<std::uint32_t>(index));
  return DeriveKey(w.Take(), "photoveil-ot-request-key");
}

Bytes IndexAad(const char* what, std::size_t index) {
  const std::string s = std::string(what) + ":" + std::to_string(index);
  return Bytes(s.begin(), s.end());
}

}  // namespace

void Group::Validate() const {
  if (mpz_probab_prime_p(p.get_mpz_t(), 40) == 0 ||
      mpz_probab_prime_p(q.get_mpz_t(), 40) == 0) {
    Fail(ErrorCode::kInvalidArgument, "OT group: p and q must be prime");
  }
  if ((p - 1) % q != 0) Fail(ErrorCode::kInvalidArgument, "OT group: q does not divide p-1");
  if (g <= 1 || g >= p || PowMod(g, q, p) != 1) {
    Fail(ErrorCode::kInvalidArgument, "OT group: g does not have order q");
  }
}

bool Group::InSubgroup(const BigInt& x) const {
  return x > 1 && x < p && PowMod(x, q, p) == 1;
}

const Group& DefaultGroup() {
  static const Group group{BigInt(kGroupP, 16), BigInt(kGroupQ, 16), BigInt(kGroupG, 16)};
  return group;
}

BigInt HashToSubgroup(const Group& group, std::size_t index) {
  const BigInt cofactor = (group.p - 1) / group.q;
  const std::size_t want = group.element_bytes() + 16;
  for (std::uint32_t counter = 0;; ++counter) {
    Bytes stream;
    for (std::uint32_t block = 0; stream.size() < want; ++block) {
      ByteWriter w;
      w.Raw(AsBytes("photoveil-ot-base"));
      w.U32(static_cast<std::uint32_t>(index));
      w.U32(counter);
      w.U32(block);
      const Digest d = Sha256(w.Take());
      stream.insert(stream.end(), d.begin(), d.end());
    }
    stream.resize(want);
    const BigInt h = PowMod(FromBytes(stream) % group.p, cofactor, group.p);
    if (h > 1) return h;
  }
}

ItemBases HashedBases(const Group& group) {
  return [&group](std::size_t i) { return HashToSubgroup(group, i); };
}

void OtChoice::Validate(std::size_t db_size) const {
  if (sigma.empty()) Fail(ErrorCode::kInvalidChoice, "no items chosen");
  if (!std::is_sorted(sigma_prime.begin(), sigma_prime.end()) ||
      std::adjacent_find(sigma_prime.begin(), sigma_prime.end()) != sigma_prime.end()) {
    Fail(ErrorCode::kInvalidChoice, "superset must be sorted and distinct");
  }
  if (!sigma_prime.empty() && sigma_prime.back() >= db_size) {
    Fail(ErrorCode::kInvalidChoice, "superset index outside the store");
  }
  std::set<std::size_t> seen;
  for (std::size_t s : sigma) {
    if (!seen.insert(s).second) Fail(ErrorCode::kInvalidChoice, "duplicate chosen index");
    if (!std::binary_search(sigma_prime.begin(), sigma_prime.end(), s)) {
      Fail(ErrorCode::kInvalidChoice,
           "chosen index " + std::to_string(s) + " missing from superset");
    }
  }
}

OtChoice MakeChoice(std::vector<std::size_t> sigma, std::size_t n,
                    std::size_t db_size, RandomSource& rng) {
  if (sigma.size() > n) Fail(ErrorCode::kInvalidChoice, "k exceeds n");
  if (n > db_size) Fail(ErrorCode::kInvalidChoice, "n exceeds the store size");
  std::set<std::size_t> all(sigma.begin(), sigma.end());
  if (all.size() != sigma.size()) Fail(ErrorCode::kInvalidChoice, "duplicate chosen index");
  for (std::size_t s : sigma) {
    if (s >= db_size) Fail(ErrorCode::kInvalidChoice, "chosen index outside the store");
  }
  while (all.size() < n) all.insert(rng.UniformU64(db_size));
  OtChoice choice{std::move(sigma), std::vector<std::size_t>(all.begin(), all.end())};
  choice.Validate(db_size);
  return choice;
}

Sender::Sender(const Group& group, std::vector<Bytes> items, RandomSource& rng,
               ItemBases bases)
    : group_(group), items_(std::move(items)), bases_(std::move(bases)) {
  if (items_.empty()) Fail(ErrorCode::kInvalidArgument, "OT store is empty");
  if (!bases_) bases_ = HashedBases(group_);
  y_ = RandomBelow(rng, group_.q - 1) + 1;
  y_pub_ = PowMod(group_.g, y_, group_.p);
  item_keys_.reserve(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) item_keys_.push_back(RandomKey(rng));
}

OtResponse Sender::Respond(const OtRequest& request, RandomSource& rng) const {
  const auto& sp = request.sigma_prime;
  if (sp.empty() || !std::is_sorted(sp.begin(), sp.end()) ||
      std::adjacent_find(sp.begin(), sp.end()) != sp.end()) {
    Fail(ErrorCode::kMalformedRequest, "superset must be non-empty, sorted and distinct");
  }
  if (sp.back() >= items_.size()) {
    Fail(ErrorCode::kNotFound, "index " + std::to_string(sp.back()) + " is not stored");
  }
  if (request.blinded.empty() || request.blinded.size() > sp.size()) {
    Fail(ErrorCode::kMalformedRequest, "request count must be in [1, |superset|]");
  }
  for (const BigInt& b : request.blinded) {
    if (!group_.InSubgroup(b)) {
      Fail(ErrorCode::kMalformedRequest, "request element outside the subgroup");
    }
  }
  std::vector<BigInt> inv_bases;
  inv_bases.reserve(sp.size());
  for (std::size_t i : sp) inv_bases.push_back(InvMod(bases_(i), group_.p));

  OtResponse resp;
  resp.y_pub = y_pub_;
  resp.sigma_prime = sp;
  for (const BigInt& b : request.blinded) {
    std::vector<Bytes> table;
    table.reserve(sp.size());
    for (std::size_t m = 0; m < sp.size(); ++m) {
      const BigInt shared = PowMod(BigInt(b * inv_bases[m] % group_.p), y_, group_.p);
      table.push_back(AeadSeal(RequestKey(group_, shared, sp[m]), item_keys_[sp[m]],
                               IndexAad("key", sp[m]), rng));
    }
    resp.key_tables.push_back(std::move(table));
  }
  for (std::size_t i : sp) {
    resp.items.push_back(AeadSeal(item_keys_[i], items_[i], IndexAad("item", i), rng));
  }
  return resp;
}

Receiver::Receiver(const Group& group, OtChoice choice, std::size_t db_size,
                   RandomSource& rng, ItemBases bases)
    : group_(group), choice_(std::move(choice)) {
  choice_.Validate(db_size);
  for (std::size_t j = 0; j < choice_.sigma.size(); ++j) {
    exponents_.push_back(RandomBelow(rng, group_.q));
  }
  BuildRequest(bases ? bases : HashedBases(group_));
}

Receiver::Receiver(const Group& group, OtChoice choice, std::size_t db_size,
                   std::vector<BigInt> exponents, ItemBases bases)
    : group_(group), choice_(std::move(choice)), exponents_(std::move(exponents)) {
  choice_.Validate(db_size);
  if (exponents_.size() != choice_.sigma.size()) {
    Fail(ErrorCode::kInvalidChoice, "need one exponent per chosen index");
  }
  BuildRequest(bases ? bases : HashedBases(group_));
}

void Receiver::BuildRequest(const ItemBases& bases) {
  request_.sigma_prime = choice_.sigma_prime;
  for (std::size_t j = 0; j < choice_.sigma.size(); ++j) {
    const BigInt gr = PowMod(group_.g, exponents_[j], group_.p);
    request_.blinded.push_back(BigInt(gr * bases(choice_.sigma[j]) % group_.p));
  }
}

Bytes Receiver::Open(const OtResponse& response, std::size_t j, std::size_t index) const {
  if (j >= exponents_.size() || response.key_tables.size() != exponents_.size() ||
      response.sigma_prime != choice_.sigma_prime ||
      response.items.size() != choice_.sigma_prime.size()) {
    Fail(ErrorCode::kProtocolViolation, "OT response does not match the request");
  }
  if (!group_.InSubgroup(response.y_pub)) {
    Fail(ErrorCode::kProtocolViolation, "OT response key outside the subgroup");
  }
  const auto& sp = choice_.sigma_prime;
  auto it = std::lower_bound(sp.begin(), sp.end(), index);
  if (it == sp.end() || *it != index) {
    Fail(ErrorCode::kInvalidChoice, "index not in the superset");
  }
  const std::size_t m = static_cast<std::size_t>(it - sp.begin());
  if (response.key_tables[j].size() != sp.size()) {
    Fail(ErrorCode::kProtocolViolation, "OT key table has the wrong length");
  }
  const BigInt shared = PowMod(response.y_pub, exponents_[j], group_.p);
  const Bytes key = AeadOpen(RequestKey(group_, shared, index), response.key_tables[j][m],
                             IndexAad("key", index));
  SymmetricKey item_key{};
  if (key.size() != item_key.size()) {
    Fail(ErrorCode::kIntegrityFailure, "OT item key has the wrong length");
  }
  std::copy(key.begin(), key.end(), item_key.begin());
  return AeadOpen(item_key, response.items[m], IndexAad("item", index));
}

std::vector<Bytes> Receiver::Finalize(const OtResponse& response) const {
  std::vector<Bytes> out;
  out.reserve(choice_.sigma.size());
  for (std::size_t j = 0; j < choice_.sigma.size(); ++j) {
    out.push_back(Open(response, j, choice_.sigma[j]));
  }
  return out;
}

}  // namespace photoveil::ot
