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

#ifndef PHOTOVEIL_OT_H_
#define PHOTOVEIL_OT_H_

#include <cstddef>
#include <functional>
#include <vector>

#include "photoveil/bigint.h"
#include "photoveil/bytes.h"
#include "photoveil/crypto.h"
#include "photoveil/random.h"

// k-out-of-n oblivious retrieval. For chosen index s the receiver sends
// B = g^r * h_s; the sender answers every index i in the public superset
// sigma' with the item key sealed under KDF((B / h_i)^y, i). Only i = s gives
// (B / h_i)^y = Y^r, which the receiver can compute.
namespace photoveil::ot {

struct Group {
  BigInt p;
  BigInt q;
  BigInt g;

  std::size_t element_bytes() const { return ByteLength(p); }
  // p, q prime, q | p - 1, g of order q. Throws kInvalidArgument.
  void Validate() const;
  bool InSubgroup(const BigInt& x) const;
};

// 2048-bit p with a 256-bit q, generated once by tools/gen_ot_group.py.
const Group& DefaultGroup();

// Maps an item index to a subgroup element.
using ItemBases = std::function<BigInt(std::size_t)>;

BigInt HashToSubgroup(const Group& group, std::size_t index);
ItemBases HashedBases(const Group& group);

struct OtChoice {
  std::vector<std::size_t> sigma;        // the k wanted indices
  std::vector<std::size_t> sigma_prime;  // sorted superset sent in clear

  // Throws kInvalidChoice unless sigma is non-empty, distinct, inside
  // sigma_prime, and sigma_prime is sorted, distinct and below db_size.
  void Validate(std::size_t db_size) const;
};

// Pads sigma with uniform random extra indices until |sigma'| = n.
OtChoice MakeChoice(std::vector<std::size_t> sigma, std::size_t n,
                    std::size_t db_size, RandomSource& rng);

struct OtRequest {
  std::vector<std::size_t> sigma_prime;
  std::vector<BigInt> blinded;  // one B per wanted item
};

struct OtResponse {
  BigInt y_pub;
  std::vector<std::size_t> sigma_prime;
  // key_tables[j][m]: item key for sigma_prime[m] sealed for request j.
  std::vector<std::vector<Bytes>> key_tables;
  std::vector<Bytes> items;  // sealed items, sigma_prime order
};

class Sender {
 public:
  Sender(const Group& group, std::vector<Bytes> items, RandomSource& rng,
         ItemBases bases = {});

  const BigInt& y_pub() const { return y_pub_; }
  std::size_t size() const { return items_.size(); }
  // Per-item payload key, fixed for the lifetime of the sender.
  const SymmetricKey& item_key(std::size_t i) const { return item_keys_.at(i); }

  // Throws kNotFound for indices outside the store and kMalformedRequest for
  // elements outside the subgroup.
  OtResponse Respond(const OtRequest& request, RandomSource& rng) const;

 private:
  const Group& group_;
  std::vector<Bytes> items_;
  std::vector<SymmetricKey> item_keys_;
  ItemBases bases_;
  BigInt y_;
  BigInt y_pub_;
};

class Receiver {
 public:
  Receiver(const Group& group, OtChoice choice, std::size_t db_size,
           RandomSource& rng, ItemBases bases = {});
  // Uses the given blinding exponents, one per sigma entry.
  Receiver(const Group& group, OtChoice choice, std::size_t db_size,
           std::vector<BigInt> exponents, ItemBases bases = {});

  const OtRequest& request() const { return request_; }
  const OtChoice& choice() const { return choice_; }

  // Items for sigma, in sigma order. Throws kIntegrityFailure.
  std::vector<Bytes> Finalize(const OtResponse& response) const;

  // Opens sigma_prime index `index` using request j's secret. Succeeds only
  // when index == sigma[j]; otherwise throws kIntegrityFailure.
  Bytes Open(const OtResponse& response, std::size_t j, std::size_t index) const;

 private:
  void BuildRequest(const ItemBases& bases);

  const Group& group_;
  OtChoice choice_;
  std::vector<BigInt> exponents_;
  OtRequest request_;
};

}  // namespace photoveil::ot

#endif  // PHOTOVEIL_OT_H_
