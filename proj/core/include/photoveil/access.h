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

#ifndef PHOTOVEIL_ACCESS_H_
#define PHOTOVEIL_ACCESS_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "photoveil/bytes.h"
#include "photoveil/crypto.h"
#include "photoveil/random.h"
#include "photoveil/rop.h"

// Policy-gated key distribution. A fresh data key encrypts the payload and is
// secret-shared down an AND/OR tree; each leaf share is wrapped under a key
// the authority derives per attribute.
//
// Limitation: leaf keys are per attribute, not per user, so two users can pool
// credentials and satisfy a policy neither satisfies alone. Unwrap refuses
// mixed-user credential sets, which stops accidental mixing but not a
// deliberate collusion. The envelope records a scheme id so a pairing-based
// backend can replace this one.
namespace photoveil::access {

inline constexpr std::string_view kSchemeId = "policy-share-v1";

struct PolicyNode {
  enum class Kind { kLeaf, kAnd, kOr };

  Kind kind = Kind::kLeaf;
  std::string attribute;  // leaves only
  std::vector<PolicyNode> children;

  static PolicyNode Leaf(std::string attribute);
  static PolicyNode And(std::vector<PolicyNode> children);
  static PolicyNode Or(std::vector<PolicyNode> children);

  bool operator==(const PolicyNode&) const = default;
};

// Grammar: node := NAME | AND(node, ...) | OR(node, ...); NAME is
// [A-Za-z0-9_.-]+ and may not be AND or OR. Throws kInvalidPolicy with the
// byte offset of the problem.
PolicyNode ParsePolicy(std::string_view text);
std::string FormatPolicy(const PolicyNode& policy);

bool EvaluatePolicy(const PolicyNode& policy, const std::set<std::string>& attrs);

// Leaf attribute names in left-to-right order (duplicates kept).
std::vector<std::string> PolicyLeaves(const PolicyNode& policy);

struct Credential {
  std::string user_id;
  std::string attribute;
  SymmetricKey attribute_key{};
  Signature signature{};

  bool operator==(const Credential&) const = default;
};

struct CredentialSet {
  std::string user_id;
  VerifyKey authority{};
  std::vector<Credential> credentials;

  std::set<std::string> Attributes() const;
  std::string ToJson() const;
  static CredentialSet FromJson(std::string_view text);
};

struct KeyEnvelope {
  std::string scheme{kSchemeId};
  VerifyKey authority{};  // issuer whose credentials can unwrap
  PolicyNode policy;
  std::vector<Bytes> shares;  // one per leaf, PolicyLeaves order
  Bytes payload;

  // JSON text: {"authority", "payload", "policy", "scheme", "shares"}.
  Bytes Serialize() const;
  static KeyEnvelope Parse(ByteSpan data);
};

class Authority {
 public:
  // Fresh master secret and signing key.
  Authority(std::set<std::string> universe, RandomSource& rng);

  const std::set<std::string>& universe() const { return universe_; }
  VerifyKey verify_key() const;

  // Throws kInvalidPolicy if the attribute is outside the universe.
  Credential Issue(const std::string& user_id, const std::string& attribute) const;
  CredentialSet IssueAll(const std::string& user_id,
                         const std::set<std::string>& attributes) const;

  KeyEnvelope Wrap(const PolicyNode& policy, ByteSpan payload,
                   RandomSource& rng) const;

  Bytes Serialize() const;
  static Authority Parse(ByteSpan data);

 private:
  Authority() = default;
  SymmetricKey LeafKey(const std::string& attribute) const;
  void CheckPolicy(const PolicyNode& policy) const;

  std::set<std::string> universe_;
  Digest master_{};
  SigningSeed signing_{};
};

// Throws kAccessDenied if credentials are invalid, come from another
// authority, belong to different users, or do not satisfy the policy; kIntegrityFailure if the envelope was altered.
Bytes Unwrap(const KeyEnvelope& envelope, const CredentialSet& credentials);

Bytes SealSecretPart(const SecretPart& secret, const SymmetricKey& k_e,
                     RandomSource& rng);
SecretPart OpenSecretPart(ByteSpan sealed, const SymmetricKey& k_e);

// Sealed secret ROP part plus the envelope carrying K_e.
struct PrivateBag {
  Bytes sealed_secret;
  Bytes envelope;

  Bytes Serialize() const;
  static PrivateBag Parse(ByteSpan data);
};

PrivateBag MakePrivateBag(const SecretPart& secret, const PolicyNode& policy,
                          const Authority& authority, RandomSource& rng);
SecretPart OpenPrivateBag(const PrivateBag& bag, const CredentialSet& credentials);

}  // namespace photoveil::access

#endif  // PHOTOVEIL_ACCESS_H_
