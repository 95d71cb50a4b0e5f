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

#include "photoveil/access.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "photoveil/error.h"

namespace photoveil::access {

namespace {

using nlohmann::json;

constexpr std::string_view kSealLabel = "photoveil-rop-secret";
constexpr std::string_view kCredentialLabel = "photoveil-credential-v1";

bool IsNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-';
}

class PolicyParser {
 public:
  explicit PolicyParser(std::string_view text) : text_(text) {}

  PolicyNode Parse() {
    PolicyNode node = Node();
    SkipSpace();
    if (pos_ != text_.size()) Error("trailing input");
    return node;
  }

 private:
  [[noreturn]] void Error(const std::string& what) const {
    Fail(ErrorCode::kInvalidPolicy,
         "policy: " + what + " at position " + std::to_string(pos_));
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string Name() {
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && IsNameChar(text_[pos_])) ++pos_;
    if (start == pos_) Error("expected attribute or AND/OR");
    return std::string(text_.substr(start, pos_ - start));
  }

  PolicyNode Node() {
    const std::size_t start = pos_;
    std::string name = Name();
    if (name != "AND" && name != "OR") return PolicyNode::Leaf(std::move(name));
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != '(') {
      pos_ = start;
      SkipSpace();
      Error("'" + name + "' is reserved and must be followed by '('");
    }
    ++pos_;
    std::vector<PolicyNode> children;
    while (true) {
      children.push_back(Node());
      SkipSpace();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
        break;
      }
      Error("expected ',' or ')'");
    }
    return name == "AND" ? PolicyNode::And(std::move(children))
                         : PolicyNode::Or(std::move(children));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void CollectLeaves(const PolicyNode& node, std::vector<std::string>& out) {
  if (node.kind == PolicyNode::Kind::kLeaf) {
    out.push_back(node.attribute);
    return;
  }
  for (const PolicyNode& c : node.children) CollectLeaves(c, out);
}

SymmetricKey Xor(const SymmetricKey& a, const SymmetricKey& b) {
  SymmetricKey out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

Bytes LeafAad(std::size_t index, const std::string& attribute) {
  const std::string s = "leaf:" + std::to_string(index) + ":" + attribute;
  return Bytes(s.begin(), s.end());
}

Bytes PayloadAad(const KeyEnvelope& env) {
  const std::string s =
      env.scheme + "|" + FormatPolicy(env.policy) + "|" + ToHex(env.authority);
  return Bytes(s.begin(), s.end());
}

Bytes CredentialMessage(const std::string& user, const std::string& attribute,
                        const SymmetricKey& key) {
  Bytes msg(kCredentialLabel.begin(), kCredentialLabel.end());
  msg.push_back(0);
  msg.insert(msg.end(), user.begin(), user.end());
  msg.push_back(0);
  msg.insert(msg.end(), attribute.begin(), attribute.end());
  msg.push_back(0);
  msg.insert(msg.end(), key.begin(), key.end());
  return msg;
}

void Split(const PolicyNode& node, const SymmetricKey& secret,
           std::vector<SymmetricKey>& leaf_shares, RandomSource& rng) {
  switch (node.kind) {
    case PolicyNode::Kind::kLeaf:
      leaf_shares.push_back(secret);
      return;
    case PolicyNode::Kind::kOr:
      for (const PolicyNode& c : node.children) Split(c, secret, leaf_shares, rng);
      return;
    case PolicyNode::Kind::kAnd: {
      SymmetricKey last = secret;
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i + 1 == node.children.size()) {
          Split(node.children[i], last, leaf_shares, rng);
        } else {
          const SymmetricKey part = RandomKey(rng);
          last = Xor(last, part);
          Split(node.children[i], part, leaf_shares, rng);
        }
      }
      return;
    }
  }
}

std::optional<SymmetricKey> Recover(const PolicyNode& node, const KeyEnvelope& env,
                                    const std::map<std::string, SymmetricKey>& keys,
                                    std::size_t& leaf) {
  switch (node.kind) {
    case PolicyNode::Kind::kLeaf: {
      const std::size_t index = leaf++;
      auto it = keys.find(node.attribute);
      if (it == keys.end()) return std::nullopt;
      Bytes share = AeadOpen(it->second, env.shares[index], LeafAad(index, node.attribute));
      if (share.size() != SymmetricKey{}.size()) {
        Fail(ErrorCode::kIntegrityFailure, "envelope share has wrong length");
      }
      SymmetricKey out;
      std::copy(share.begin(), share.end(), out.begin());
      return out;
    }
    case PolicyNode::Kind::kOr: {
      std::optional<SymmetricKey> found;
      for (const PolicyNode& c : node.children) {
        auto v = Recover(c, env, keys, leaf);
        if (!found && v) found = v;
      }
      return found;
    }
    case PolicyNode::Kind::kAnd: {
      SymmetricKey acc{};
      bool complete = true;
      for (const PolicyNode& c : node.children) {
        auto v = Recover(c, env, keys, leaf);
        if (v) {
          acc = Xor(acc, *v);
        } else {
          complete = false;
        }
      }
      if (!complete) return std::nullopt;
      return acc;
    }
  }
  return std::nullopt;
}

template <typename Array>
Array ArrayFromBase64(const std::string& text, const char* what) {
  Bytes raw = FromBase64(text);
  Array out{};
  if (raw.size() != out.size()) {
    Fail(ErrorCode::kParseError, std::string(what) + ": wrong length");
  }
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

json ParseJson(std::string_view text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    Fail(ErrorCode::kParseError, std::string(what) + ": invalid JSON");
  }
  return j;
}

template <typename T>
T Field(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) {
    Fail(ErrorCode::kParseError, std::string(what) + ": missing '" + key + "'");
  }
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    Fail(ErrorCode::kParseError, std::string(what) + ": bad '" + key + "'");
  }
}

}  // namespace

PolicyNode PolicyNode::Leaf(std::string attribute) {
  PolicyNode n;
  n.kind = Kind::kLeaf;
  n.attribute = std::move(attribute);
  return n;
}

PolicyNode PolicyNode::And(std::vector<PolicyNode> children) {
  if (children.empty()) Fail(ErrorCode::kInvalidPolicy, "AND needs children");
  PolicyNode n;
  n.kind = Kind::kAnd;
  n.children = std::move(children);
  return n;
}

PolicyNode PolicyNode::Or(std::vector<PolicyNode> children) {
  if (children.empty()) Fail(ErrorCode::kInvalidPolicy, "OR needs children");
  PolicyNode n;
  n.kind = Kind::kOr;
  n.children = std::move(children);
  return n;
}

PolicyNode ParsePolicy(std::string_view text) { return PolicyParser(text).Parse(); }

std::string FormatPolicy(const PolicyNode& policy) {
  if (policy.kind == PolicyNode::Kind::kLeaf) return policy.attribute;
  std::string out = policy.kind == PolicyNode::Kind::kAnd ? "AND(" : "OR(";
  for (std::size_t i = 0; i < policy.children.size(); ++i) {
    if (i) out += ',';
    out += FormatPolicy(policy.children[i]);
  }
  return out + ")";
}

bool EvaluatePolicy(const PolicyNode& policy, const std::set<std::string>& attrs) {
  switch (policy.kind) {
    case PolicyNode::Kind::kLeaf:
      return attrs.contains(policy.attribute);
    case PolicyNode::Kind::kAnd:
      for (const PolicyNode& c : policy.children) {
        if (!EvaluatePolicy(c, attrs)) return false;
      }
      return true;
    case PolicyNode::Kind::kOr:
      for (const PolicyNode& c : policy.children) {
        if (EvaluatePolicy(c, attrs)) return true;
      }
      return false;
  }
  return false;
}

std::vector<std::string> PolicyLeaves(const PolicyNode& policy) {
  std::vector<std::string> out;
  CollectLeaves(policy, out);
  return out;
}

std::set<std::string> CredentialSet::Attributes() const {
  std::set<std::string> out;
  for (const Credential& c : credentials) out.insert(c.attribute);
  return out;
}

std::string CredentialSet::ToJson() const {
  json creds = json::array();
  for (const Credential& c : credentials) {
    creds.push_back({{"attribute", c.attribute},
                     {"key", ToBase64(c.attribute_key)},
                     {"signature", ToBase64(c.signature)},
                     {"user", c.user_id}});
  }
  json j = {{"authority", ToBase64(authority)},
            {"credentials", creds},
            {"user", user_id}};
  return j.dump(2) + "\n";
}

CredentialSet CredentialSet::FromJson(std::string_view text) {
  const char* what = "credentials";
  json j = ParseJson(text, what);
  CredentialSet set;
  set.user_id = Field<std::string>(j, "user", what);
  set.authority = ArrayFromBase64<VerifyKey>(Field<std::string>(j, "authority", what),
                                             "authority key");
  for (const json& c : Field<json>(j, "credentials", what)) {
    Credential cred;
    cred.user_id = Field<std::string>(c, "user", what);
    cred.attribute = Field<std::string>(c, "attribute", what);
    cred.attribute_key =
        ArrayFromBase64<SymmetricKey>(Field<std::string>(c, "key", what), "attribute key");
    cred.signature =
        ArrayFromBase64<Signature>(Field<std::string>(c, "signature", what), "signature");
    set.credentials.push_back(std::move(cred));
  }
  return set;
}

Bytes KeyEnvelope::Serialize() const {
  json shares_json = json::array();
  for (const Bytes& s : shares) shares_json.push_back(ToBase64(s));
  json j = {{"authority", ToBase64(authority)},
            {"payload", ToBase64(payload)},
            {"policy", FormatPolicy(policy)},
            {"scheme", scheme},
            {"shares", shares_json}};
  const std::string text = j.dump();
  return Bytes(text.begin(), text.end());
}

KeyEnvelope KeyEnvelope::Parse(ByteSpan data) {
  const char* what = "key envelope";
  json j = ParseJson(AsString(data), what);
  KeyEnvelope env;
  env.scheme = Field<std::string>(j, "scheme", what);
  if (env.scheme != kSchemeId) {
    Fail(ErrorCode::kUnsupportedFormat, "key envelope: unknown scheme '" + env.scheme + "'");
  }
  env.authority =
      ArrayFromBase64<VerifyKey>(Field<std::string>(j, "authority", what), "authority");
  env.policy = ParsePolicy(Field<std::string>(j, "policy", what));
  for (const std::string& s : Field<std::vector<std::string>>(j, "shares", what)) {
    env.shares.push_back(FromBase64(s));
  }
  if (env.shares.size() != PolicyLeaves(env.policy).size()) {
    Fail(ErrorCode::kParseError, "key envelope: share count does not match policy");
  }
  env.payload = FromBase64(Field<std::string>(j, "payload", what));
  return env;
}

Authority::Authority(std::set<std::string> universe, RandomSource& rng)
    : universe_(std::move(universe)) {
  for (const std::string& a : universe_) {
    if (a.empty() || a == "AND" || a == "OR" ||
        !std::all_of(a.begin(), a.end(), IsNameChar)) {
      Fail(ErrorCode::kInvalidPolicy, "invalid attribute name '" + a + "'");
    }
  }
  rng.Fill(master_);
  rng.Fill(signing_);
}

VerifyKey Authority::verify_key() const { return Ed25519PublicKey(signing_); }

SymmetricKey Authority::LeafKey(const std::string& attribute) const {
  const Digest d = HmacSha256(master_, AsBytes("leaf:" + attribute));
  SymmetricKey out;
  std::copy_n(d.begin(), out.size(), out.begin());
  return out;
}

void Authority::CheckPolicy(const PolicyNode& policy) const {
  for (const std::string& a : PolicyLeaves(policy)) {
    if (!universe_.contains(a)) {
      Fail(ErrorCode::kInvalidPolicy, "attribute '" + a + "' is not in the universe");
    }
  }
}

Credential Authority::Issue(const std::string& user_id,
                            const std::string& attribute) const {
  if (!universe_.contains(attribute)) {
    Fail(ErrorCode::kInvalidPolicy, "attribute '" + attribute + "' is not in the universe");
  }
  if (user_id.empty()) Fail(ErrorCode::kInvalidArgument, "empty user id");
  Credential c{user_id, attribute, LeafKey(attribute), {}};
  c.signature = Ed25519Sign(signing_, CredentialMessage(user_id, attribute, c.attribute_key));
  return c;
}

CredentialSet Authority::IssueAll(const std::string& user_id,
                                  const std::set<std::string>& attributes) const {
  CredentialSet set{user_id, verify_key(), {}};
  for (const std::string& a : attributes) set.credentials.push_back(Issue(user_id, a));
  return set;
}

KeyEnvelope Authority::Wrap(const PolicyNode& policy, ByteSpan payload,
                            RandomSource& rng) const {
  CheckPolicy(policy);
  const SymmetricKey dek = RandomKey(rng);
  std::vector<SymmetricKey> leaf_shares;
  Split(policy, dek, leaf_shares, rng);
  const std::vector<std::string> leaves = PolicyLeaves(policy);
  KeyEnvelope env;
  env.authority = verify_key();
  env.policy = policy;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    env.shares.push_back(
        AeadSeal(LeafKey(leaves[i]), leaf_shares[i], LeafAad(i, leaves[i]), rng));
  }
  env.payload = AeadSeal(dek, payload, PayloadAad(env), rng);
  return env;
}

Bytes Authority::Serialize() const {
  json j = {{"master", ToBase64(master_)},
            {"signing", ToBase64(signing_)},
            {"universe", universe_}};
  const std::string text = j.dump(2) + "\n";
  return Bytes(text.begin(), text.end());
}

Authority Authority::Parse(ByteSpan data) {
  const char* what = "authority state";
  json j = ParseJson(AsString(data), what);
  Authority a;
  a.universe_ = Field<std::set<std::string>>(j, "universe", what);
  a.master_ = ArrayFromBase64<Digest>(Field<std::string>(j, "master", what), "master");
  a.signing_ =
      ArrayFromBase64<SigningSeed>(Field<std::string>(j, "signing", what), "signing key");
  return a;
}

Bytes Unwrap(const KeyEnvelope& envelope, const CredentialSet& credentials) {
  if (envelope.scheme != kSchemeId) {
    Fail(ErrorCode::kUnsupportedFormat, "unknown envelope scheme");
  }
  if (credentials.authority != envelope.authority) {
    Fail(ErrorCode::kAccessDenied, "credentials come from a different authority");
  }
  std::map<std::string, SymmetricKey> keys;
  for (const Credential& c : credentials.credentials) {
    if (c.user_id != credentials.user_id) {
      Fail(ErrorCode::kAccessDenied, "credentials belong to more than one user");
    }
    if (!Ed25519Verify(credentials.authority,
                       CredentialMessage(c.user_id, c.attribute, c.attribute_key),
                       c.signature)) {
      Fail(ErrorCode::kAccessDenied,
           "credential for '" + c.attribute + "' has an invalid signature");
    }
    keys[c.attribute] = c.attribute_key;
  }
  if (!EvaluatePolicy(envelope.policy, credentials.Attributes())) {
    Fail(ErrorCode::kAccessDenied, "attributes do not satisfy policy " +
                                       FormatPolicy(envelope.policy));
  }
  if (envelope.shares.size() != PolicyLeaves(envelope.policy).size()) {
    Fail(ErrorCode::kIntegrityFailure, "envelope share count does not match policy");
  }
  std::size_t leaf = 0;
  std::optional<SymmetricKey> dek = Recover(envelope.policy, envelope, keys, leaf);
  if (!dek) Fail(ErrorCode::kAccessDenied, "policy not satisfied");
  return AeadOpen(*dek, envelope.payload, PayloadAad(envelope));
}

Bytes SealSecretPart(const SecretPart& secret, const SymmetricKey& k_e,
                     RandomSource& rng) {
  return AeadSeal(k_e, secret.Serialize(), AsBytes(kSealLabel), rng);
}

SecretPart OpenSecretPart(ByteSpan sealed, const SymmetricKey& k_e) {
  return SecretPart::Parse(AeadOpen(k_e, sealed, AsBytes(kSealLabel)));
}

Bytes PrivateBag::Serialize() const {
  ByteWriter w;
  w.Blob(sealed_secret);
  w.Blob(envelope);
  return w.Take();
}

PrivateBag PrivateBag::Parse(ByteSpan data) {
  ByteReader rd(data);
  PrivateBag bag;
  ByteSpan sealed = rd.Blob();
  ByteSpan env = rd.Blob();
  rd.ExpectDone();
  bag.sealed_secret.assign(sealed.begin(), sealed.end());
  bag.envelope.assign(env.begin(), env.end());
  return bag;
}

PrivateBag MakePrivateBag(const SecretPart& secret, const PolicyNode& policy,
                          const Authority& authority, RandomSource& rng) {
  const SymmetricKey k_e = RandomKey(rng);
  PrivateBag bag;
  bag.sealed_secret = SealSecretPart(secret, k_e, rng);
  bag.envelope = authority.Wrap(policy, k_e, rng).Serialize();
  return bag;
}

SecretPart OpenPrivateBag(const PrivateBag& bag, const CredentialSet& credentials) {
  const Bytes k = Unwrap(KeyEnvelope::Parse(bag.envelope), credentials);
  if (k.size() != SymmetricKey{}.size()) {
    Fail(ErrorCode::kIntegrityFailure, "private bag key has wrong length");
  }
  SymmetricKey k_e;
  std::copy(k.begin(), k.end(), k_e.begin());
  return OpenSecretPart(bag.sealed_secret, k_e);
}

}  // namespace photoveil::access
