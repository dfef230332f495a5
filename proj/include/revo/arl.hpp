// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "revo/bloom.hpp"
#include "revo/core.hpp"

namespace revo {

enum class ArlMode {
    exact,       // definitive per-issuer hash storage plus Bloom pre-filter
    bloom_only,  // low-memory: filter and per-set metadata only
};

struct ArlConfig {
    ArlMode mode = ArlMode::exact;
    /// Capacity the filter is sized for; the filter is rebuilt at twice the
    /// capacity once the inserted count exceeds it (exact mode only).
    std::uint64_t expected_capacity = 100'000;
    double target_fpp = 1e-9;
    std::uint32_t bloom_hashes = 10;
    std::uint64_t bloom_salt = 0;
};

enum class StoreOutcome {
    stored,
    duplicate,  // bit-identical payload already held under (issuer, version)
    conflict,   // different payload under an existing (issuer, version)
};

struct VerificationResult {
    enum class Status { not_revoked, revoked, probably_revoked };
    Status status = Status::not_revoked;
    /// Issuers that revoked the credential (exact mode only), sorted by id.
    std::vector<IssuerId> issuers;
};

/// Per-client store of accepted revocations grouped by (issuer, version).
///
/// Callers must run trust and signature checks before store(); the ARL only
/// enforces canonical form and per-key payload consistency. Mutations are
/// expected to be serialized by the owning node; any number of readers may
/// run verify_credential against a consistent snapshot, and a stored set's
/// hashes are always present in the filter before the set becomes visible.
class Arl {
  public:
    using SetPtr = std::shared_ptr<const SignedRevocationSet>;

    explicit Arl(ArlConfig config = {})
        : config_(config),
          filter_(bloom_bits_for(config.bloom_hashes,
                                 std::max<std::uint64_t>(config.expected_capacity, 1),
                                 config.target_fpp),
                  config.bloom_hashes, config.bloom_salt) {}

    ArlMode mode() const { return config_.mode; }
    const BloomFilter& filter() const { return filter_; }

    StoreOutcome store(SetPtr payload) {
        const auto& set = payload->set;
        Digest256 fingerprint = payload_fingerprint(*payload);
        IssuerId issuer = issuer_id_of(set.issuer_public_key);
        auto& versions = by_issuer_[issuer];
        if (auto it = versions.find(set.version); it != versions.end())
            return it->second.fingerprint == fingerprint ? StoreOutcome::duplicate
                                                         : StoreOutcome::conflict;

        if (config_.mode == ArlMode::exact) maybe_grow(set.hashes.size());
        for (const auto& h : set.hashes) filter_.insert(h);
        total_hashes_ += set.hashes.size();

        Entry entry;
        entry.fingerprint = fingerprint;
        entry.published_at = set.published_at;
        entry.hash_count = set.hashes.size();
        if (config_.mode == ArlMode::exact) entry.payload = std::move(payload);
        versions.emplace(set.version, std::move(entry));
        ++set_count_;
        return StoreOutcome::stored;
    }

    StoreOutcome store(SignedRevocationSet payload) {
        return store(std::make_shared<const SignedRevocationSet>(std::move(payload)));
    }

    VerificationResult verify_credential(const Digest256& credential_hash) const {
        VerificationResult result;
        if (!filter_.contains(credential_hash)) return result;
        if (config_.mode == ArlMode::bloom_only) {
            result.status = VerificationResult::Status::probably_revoked;
            return result;
        }
        // Definitive search so Bloom false positives never surface.
        for (const auto& [issuer, versions] : by_issuer_) {
            for (const auto& [version, entry] : versions) {
                if (std::binary_search(entry.payload->set.hashes.begin(),
                                       entry.payload->set.hashes.end(),
                                       credential_hash)) {
                    result.issuers.push_back(issuer);
                    break;
                }
            }
        }
        if (!result.issuers.empty()) {
            result.status = VerificationResult::Status::revoked;
            std::sort(result.issuers.begin(), result.issuers.end());
        }
        return result;
    }

    /// Smallest positive version not stored for the issuer; 1 when nothing
    /// from the issuer is held.
    Version lowest_missing_version(const IssuerId& issuer) const {
        Version v = 1;
        if (auto it = by_issuer_.find(issuer); it != by_issuer_.end())
            for (const auto& [version, entry] : it->second) {
                if (version != v) break;
                ++v;
            }
        return v;
    }

    /// Highest v such that versions 1..v are all held; 0 when version 1 is
    /// missing.
    Version highest_contiguous_version(const IssuerId& issuer) const {
        return lowest_missing_version(issuer) - 1;
    }

    SetPtr get(const IssuerId& issuer, Version version) const {
        auto it = by_issuer_.find(issuer);
        if (it == by_issuer_.end()) return nullptr;
        auto vit = it->second.find(version);
        if (vit == it->second.end()) return nullptr;
        return vit->second.payload;
    }

    /// All stored sets of the issuer with version >= from, ascending.
    std::vector<SetPtr> sets_from(const IssuerId& issuer, Version from) const {
        std::vector<SetPtr> out;
        auto it = by_issuer_.find(issuer);
        if (it == by_issuer_.end()) return out;
        for (auto vit = it->second.lower_bound(from); vit != it->second.end(); ++vit)
            if (vit->second.payload) out.push_back(vit->second.payload);
        return out;
    }

    std::vector<Version> versions_of(const IssuerId& issuer) const {
        std::vector<Version> out;
        if (auto it = by_issuer_.find(issuer); it != by_issuer_.end())
            for (const auto& [version, entry] : it->second) out.push_back(version);
        return out;
    }

    std::vector<IssuerId> issuers() const {
        std::vector<IssuerId> out;
        out.reserve(by_issuer_.size());
        for (const auto& [issuer, versions] : by_issuer_) out.push_back(issuer);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Drops sets with published_at < now - horizon and rebuilds the filter
    /// from the survivors (Bloom filters do not support deletion). Returns
    /// the number of sets removed. Exact mode only: without stored hashes a
    /// rebuild is impossible.
    std::size_t prune(std::uint64_t horizon_seconds, std::uint64_t now) {
        if (config_.mode != ArlMode::exact)
            throw std::logic_error("prune requires exact mode");
        std::uint64_t cutoff = horizon_seconds >= now ? 0 : now - horizon_seconds;
        std::size_t removed = 0;
        for (auto it = by_issuer_.begin(); it != by_issuer_.end();) {
            auto& versions = it->second;
            for (auto vit = versions.begin(); vit != versions.end();) {
                if (vit->second.published_at < cutoff) {
                    total_hashes_ -= vit->second.hash_count;
                    --set_count_;
                    ++removed;
                    vit = versions.erase(vit);
                } else {
                    ++vit;
                }
            }
            it = versions.empty() ? by_issuer_.erase(it) : ++it;
        }
        if (removed > 0) rebuild_filter();
        return removed;
    }

    std::size_t set_count() const { return set_count_; }
    std::uint64_t hash_count() const { return total_hashes_; }

    /// Walks every stored set (exact mode), ascending by issuer then version.
    template <class Fn>
    void for_each_set(Fn&& fn) const {
        for (const auto& issuer : issuers()) {
            const auto& versions = by_issuer_.at(issuer);
            for (const auto& [version, entry] : versions)
                if (entry.payload) fn(*entry.payload);
        }
    }

  private:
    struct Entry {
        SetPtr payload;  // null in bloom_only mode
        Digest256 fingerprint;
        std::uint64_t published_at = 0;
        std::uint64_t hash_count = 0;
    };

    static Digest256 payload_fingerprint(const SignedRevocationSet& payload) {
        Bytes buf = canonical_bytes(payload.set);
        buf.insert(buf.end(), payload.signature.begin(), payload.signature.end());
        return sha3_256(buf);
    }

    void maybe_grow(std::size_t incoming) {
        std::uint64_t projected = filter_.inserted_count() + incoming;
        if (projected <= capacity()) return;
        while (projected > capacity()) config_.expected_capacity *= 2;
        rebuild_filter();
    }

    std::uint64_t capacity() const { return config_.expected_capacity; }

    void rebuild_filter() {
        filter_ = BloomFilter(bloom_bits_for(config_.bloom_hashes,
                                             std::max<std::uint64_t>(capacity(), 1),
                                             config_.target_fpp),
                              config_.bloom_hashes, config_.bloom_salt);
        for (const auto& [issuer, versions] : by_issuer_)
            for (const auto& [version, entry] : versions)
                if (entry.payload)
                    for (const auto& h : entry.payload->set.hashes) filter_.insert(h);
    }

    ArlConfig config_;
    BloomFilter filter_;
    std::unordered_map<IssuerId, std::map<Version, Entry>, IssuerIdHash> by_issuer_;
    std::uint64_t total_hashes_ = 0;
    std::size_t set_count_ = 0;
};

}  // namespace revo
