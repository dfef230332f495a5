// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <memory>
#include <stdexcept>
#include <string_view>

#include <openssl/evp.h>

#include "revo/bytes.hpp"

namespace revo {

/// SHA3-256 (FIPS 202) of arbitrary bytes.
inline Digest256 sha3_256(ByteSpan data) {
    Digest256 out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len,
                   EVP_sha3_256(), nullptr) != 1 ||
        len != 32)
        throw std::runtime_error("sha3-256 digest failed");
    return out;
}

inline Digest256 sha3_256(std::string_view data) {
    return sha3_256(ByteSpan{reinterpret_cast<const std::uint8_t*>(data.data()),
                             data.size()});
}

/// Signature scheme reference profile: Ed25519. 32-byte secret seeds,
/// 32-byte public keys, 64-byte signatures.
inline constexpr std::size_t kSecretKeySize = 32;
inline constexpr std::size_t kPublicKeySize = 32;
inline constexpr std::size_t kSignatureSize = 64;

struct KeyPair {
    Bytes public_key;
    Bytes secret_key;
};

namespace detail {

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

inline PkeyPtr load_secret(ByteSpan secret) {
    if (secret.size() != kSecretKeySize)
        throw std::invalid_argument("secret key must be 32 bytes");
    PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                             secret.data(), secret.size()));
    if (!key) throw std::runtime_error("failed to load ed25519 secret key");
    return key;
}

}  // namespace detail

/// Deterministic key pair from a 32-byte seed (the seed is the secret key).
inline KeyPair keygen(ByteSpan seed) {
    if (seed.size() != kSecretKeySize)
        throw std::invalid_argument("keygen seed must be 32 bytes");
    auto key = detail::load_secret(seed);
    KeyPair kp;
    kp.secret_key.assign(seed.begin(), seed.end());
    kp.public_key.resize(kPublicKeySize);
    std::size_t len = kp.public_key.size();
    if (EVP_PKEY_get_raw_public_key(key.get(), kp.public_key.data(), &len) != 1 ||
        len != kPublicKeySize)
        throw std::runtime_error("failed to derive ed25519 public key");
    return kp;
}

inline Bytes sign(ByteSpan secret_key, ByteSpan message) {
    auto key = detail::load_secret(secret_key);
    detail::MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr,
                                   key.get()) != 1)
        throw std::runtime_error("ed25519 sign init failed");
    Bytes sig(kSignatureSize);
    std::size_t len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(),
                       message.size()) != 1 ||
        len != kSignatureSize)
        throw std::runtime_error("ed25519 sign failed");
    return sig;
}

/// Total verification: any malformed key, signature, or message yields
/// reject rather than an error.
inline bool verify(ByteSpan public_key, ByteSpan signature, ByteSpan message) {
    if (public_key.size() != kPublicKeySize || signature.size() != kSignatureSize)
        return false;
    detail::PkeyPtr key(EVP_PKEY_new_raw_public_key(
        EVP_PKEY_ED25519, nullptr, public_key.data(), public_key.size()));
    if (!key) return false;
    detail::MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr,
                                     key.get()) != 1)
        return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(),
                            message.data(), message.size()) == 1;
}

}  // namespace revo
