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

#include "photoveil/crypto.h"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <memory>

#include "photoveil/error.h"

namespace photoveil {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

constexpr std::size_t kNonceBytes = 12;
constexpr std::size_t kTagBytes = 16;

[[noreturn]] void CryptoFailure(const char* what) {
  Fail(ErrorCode::kIoError, std::string("openssl: ") + what);
}

Pkey LoadSigningKey(const SigningSeed& seed) {
  Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(),
                                        seed.size()));
  if (!key) CryptoFailure("ed25519 private key");
  return key;
}

}  // namespace

Digest Sha256(ByteSpan data) { return Sha256({data}); }

Digest Sha256(std::initializer_list<ByteSpan> parts) {
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    CryptoFailure("sha256 init");
  }
  for (ByteSpan p : parts) {
    if (EVP_DigestUpdate(ctx.get(), p.data(), p.size()) != 1) {
      CryptoFailure("sha256 update");
    }
  }
  Digest out;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1) {
    CryptoFailure("sha256 final");
  }
  return out;
}

Digest HmacSha256(ByteSpan key, ByteSpan data) {
  Digest out;
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
           data.size(), out.data(), &len) == nullptr) {
    CryptoFailure("hmac");
  }
  return out;
}

SymmetricKey DeriveKey(ByteSpan ikm, std::string_view label) {
  const Digest d = HmacSha256(AsBytes(label), ikm);
  SymmetricKey key;
  std::copy_n(d.begin(), key.size(), key.begin());
  return key;
}

SymmetricKey RandomKey(RandomSource& rng) {
  SymmetricKey key;
  rng.Fill(key);
  return key;
}

Bytes AeadSeal(const SymmetricKey& key, ByteSpan plaintext, ByteSpan aad,
               RandomSource& rng) {
  Bytes out(kNonceBytes + plaintext.size() + kTagBytes);
  rng.Fill(std::span(out.data(), kNonceBytes));

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                         out.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data() + kNonceBytes, &len,
                        plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + kNonceBytes + len, &len) !=
          1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagBytes,
                          out.data() + kNonceBytes + plaintext.size()) != 1) {
    CryptoFailure("aes-gcm seal");
  }
  return out;
}

Bytes AeadOpen(const SymmetricKey& key, ByteSpan sealed, ByteSpan aad) {
  if (sealed.size() < kNonceBytes + kTagBytes) {
    Fail(ErrorCode::kIntegrityFailure, "sealed payload too short");
  }
  const std::size_t body = sealed.size() - kNonceBytes - kTagBytes;
  Bytes out(body);
  Bytes tag(sealed.end() - kTagBytes, sealed.end());

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                         sealed.data()) != 1 ||
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1 ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len,
                        sealed.data() + kNonceBytes,
                        static_cast<int>(body)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagBytes,
                          tag.data()) != 1) {
    CryptoFailure("aes-gcm open");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) {
    Fail(ErrorCode::kIntegrityFailure, "authenticated decryption failed");
  }
  return out;
}

VerifyKey Ed25519PublicKey(const SigningSeed& seed) {
  Pkey key = LoadSigningKey(seed);
  VerifyKey out;
  std::size_t len = out.size();
  if (EVP_PKEY_get_raw_public_key(key.get(), out.data(), &len) != 1) {
    CryptoFailure("ed25519 public key");
  }
  return out;
}

Signature Ed25519Sign(const SigningSeed& seed, ByteSpan message) {
  Pkey key = LoadSigningKey(seed);
  MdCtx ctx(EVP_MD_CTX_new());
  Signature sig;
  std::size_t len = sig.size();
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) !=
          1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(),
                     message.size()) != 1) {
    CryptoFailure("ed25519 sign");
  }
  return sig;
}

bool Ed25519Verify(const VerifyKey& key, ByteSpan message,
                   const Signature& sig) {
  Pkey pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.data(),
                                        key.size()));
  if (!pkey) return false;
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr,
                                   pkey.get()) != 1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), message.data(),
                          message.size()) == 1;
}

}  // namespace photoveil
