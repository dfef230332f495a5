// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "revo/bytes.hpp"
#include "revo/crypto.hpp"

namespace revo {

/// Per-issuer version label: a dense counter 1, 2, 3, ... with no gaps.
using Version = std::uint64_t;

/// An issuer is identified by the SHA3-256 digest of its public key.
struct IssuerId {
    Digest256 digest;

    auto operator<=>(const IssuerId&) const = default;
};

struct IssuerIdHash {
    std::size_t operator()(const IssuerId& id) const noexcept {
        return Digest256Hash{}(id.digest);
    }
};

inline IssuerId issuer_id_of(ByteSpan public_key) {
    return IssuerId{sha3_256(public_key)};
}

using DigestSet = std::unordered_set<Digest256, Digest256Hash>;

/// One published batch of revocations. Canonical form requires the hashes
/// to be duplicate-free and sorted ascending by raw byte order.
struct RevocationSet {
    Bytes issuer_public_key;
    Version version = 0;
    std::uint64_t published_at = 0;  // unix seconds
    std::vector<Digest256> hashes;
};

struct SignedRevocationSet {
    RevocationSet set;
    Bytes signature;
};

enum class Validity {
    valid,
    bad_signature,
    empty_set,
    non_canonical_order,
    duplicate_hash,
    bad_version,
};

inline const char* to_string(Validity v) {
    switch (v) {
        case Validity::valid: return "valid";
        case Validity::bad_signature: return "bad-signature";
        case Validity::empty_set: return "empty-set";
        case Validity::non_canonical_order: return "non-canonical-order";
        case Validity::duplicate_hash: return "duplicate-hash";
        case Validity::bad_version: return "bad-version";
    }
    return "unknown";
}

/// Structural (signature-independent) canonical-form check.
inline Validity check_canonical_form(const RevocationSet& set) {
    if (set.version < 1) return Validity::bad_version;
    if (set.hashes.empty()) return Validity::empty_set;
    for (std::size_t i = 1; i < set.hashes.size(); ++i) {
        if (set.hashes[i] == set.hashes[i - 1]) return Validity::duplicate_hash;
        if (set.hashes[i] < set.hashes[i - 1]) return Validity::non_canonical_order;
    }
    return Validity::valid;
}

inline constexpr char kCanonicalDomainTag[] = "SSI-REV-V1";

/// Deterministic signing preimage:
///   "SSI-REV-V1" || u16 pk_len || pk || u64 version || u64 published_at ||
///   u32 hash_count || sorted 32-byte hashes
/// All integers big-endian. Throws if the set is not in canonical form.
inline Bytes canonical_bytes(const RevocationSet& set) {
    if (auto v = check_canonical_form(set); v != Validity::valid)
        throw std::invalid_argument(std::string("revocation set not canonical: ") +
                                    to_string(v));
    if (set.issuer_public_key.empty() || set.issuer_public_key.size() > 0xffff)
        throw std::invalid_argument("issuer public key length out of range");
    Bytes out;
    out.reserve(10 + 2 + set.issuer_public_key.size() + 8 + 8 + 4 +
                32 * set.hashes.size());
    out.insert(out.end(), kCanonicalDomainTag, kCanonicalDomainTag + 10);
    put_u16(out, static_cast<std::uint16_t>(set.issuer_public_key.size()));
    out.insert(out.end(), set.issuer_public_key.begin(), set.issuer_public_key.end());
    put_u64(out, set.version);
    put_u64(out, set.published_at);
    put_u32(out, static_cast<std::uint32_t>(set.hashes.size()));
    for (const auto& h : set.hashes) out.insert(out.end(), h.bytes.begin(), h.bytes.end());
    return out;
}

/// Builds and signs one revocation set. The hashes are sorted and
/// deduplicated; overlap with previously published revocations is an error
/// because later sets may only contain new revocations.
inline SignedRevocationSet issue_revocations(const KeyPair& keypair,
                                             Version next_version,
                                             std::uint64_t published_at,
                                             std::vector<Digest256> new_hashes,
                                             const DigestSet& previously_revoked) {
    if (next_version < 1) throw std::invalid_argument("version labels start at 1");
    if (new_hashes.empty())
        throw std::invalid_argument("empty revocation sets are illegal");
    std::sort(new_hashes.begin(), new_hashes.end());
    new_hashes.erase(std::unique(new_hashes.begin(), new_hashes.end()),
                     new_hashes.end());
    for (const auto& h : new_hashes)
        if (previously_revoked.contains(h))
            throw std::invalid_argument("hash already revoked: " + to_hex(h));

    SignedRevocationSet out;
    out.set.issuer_public_key = keypair.public_key;
    out.set.version = next_version;
    out.set.published_at = published_at;
    out.set.hashes = std::move(new_hashes);
    out.signature = sign(keypair.secret_key, canonical_bytes(out.set));
    return out;
}

/// Total validity check over arbitrary decoded input: canonical form plus
/// signature over the canonical bytes.
inline Validity validate_signed_set(const SignedRevocationSet& candidate) {
    if (auto v = check_canonical_form(candidate.set); v != Validity::valid) return v;
    if (candidate.set.issuer_public_key.empty() ||
        candidate.set.issuer_public_key.size() > 0xffff)
        return Validity::bad_signature;
    if (!verify(candidate.set.issuer_public_key, candidate.signature,
                canonical_bytes(candidate.set)))
        return Validity::bad_signature;
    return Validity::valid;
}

/// Stateful issuer: tracks the dense version counter and everything it has
/// already revoked, and splits large batches into chained sets before
/// signing so that one set maps to one wire payload.
class Issuer {
  public:
    explicit Issuer(KeyPair keypair) : keypair_(std::move(keypair)) {}

    const KeyPair& keypair() const { return keypair_; }
    IssuerId id() const { return issuer_id_of(keypair_.public_key); }
    Version max_version() const { return max_version_; }
    const DigestSet& revoked() const { return revoked_; }

    /// Registers an already-published set (log replay). Versions must arrive
    /// in order 1, 2, 3, ...
    void restore(const SignedRevocationSet& s) {
        if (s.set.version != max_version_ + 1)
            throw std::invalid_argument("restored set out of version order");
        for (const auto& h : s.set.hashes) revoked_.insert(h);
        max_version_ = s.set.version;
    }

    SignedRevocationSet issue(std::vector<Digest256> hashes,
                              std::uint64_t published_at) {
        auto s = issue_revocations(keypair_, max_version_ + 1, published_at,
                                   std::move(hashes), revoked_);
        for (const auto& h : s.set.hashes) revoked_.insert(h);
        max_version_ = s.set.version;
        return s;
    }

    /// Splits `hashes` into consecutive sets of at most `batch_size` and
    /// issues them under consecutive versions.
    std::vector<SignedRevocationSet> issue_batches(
        const std::vector<Digest256>& hashes, std::size_t batch_size,
        std::uint64_t published_at) {
        if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
        std::vector<SignedRevocationSet> out;
        for (std::size_t begin = 0; begin < hashes.size(); begin += batch_size) {
            auto end = std::min(begin + batch_size, hashes.size());
            out.push_back(issue({hashes.begin() + begin, hashes.begin() + end},
                                published_at));
        }
        return out;
    }

  private:
    KeyPair keypair_;
    Version max_version_ = 0;
    DigestSet revoked_;
};

}  // namespace revo
