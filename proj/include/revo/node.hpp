// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "revo/arl.hpp"
#include "revo/tis.hpp"
#include "revo/wire.hpp"

namespace revo {

/// All node timestamps are microseconds on the owner's clock. The node never
/// reads a clock itself; callers pass `now` into every handler so the same
/// state machine runs under real time and under simulated time.
using Micros = std::int64_t;

struct NodeConfig {
    Micros gossip_interval = 100'000;   // t_g, default 100 ms
    int gossip_fanout = 5;              // n_g
    /// How long an advertisement entitles the receiver to pull from us.
    /// 0 means "use 5 * gossip_interval".
    Micros advertisement_ttl = 0;
    std::uint32_t max_hashes_per_payload = 1000;
    /// Advertisements are capped at this many entries and round-robin across
    /// issuers on consecutive builds.
    std::uint32_t max_ad_entries = 1000;
    bool eager_push = false;
    ArlConfig arl;
};

template <class PeerId>
struct PeerRecord {
    Micros last_advertised_to = std::numeric_limits<Micros>::min();
    std::vector<wire::AdEntry> last_advertisement_content;
};

enum class ReceiveOutcome {
    stored,
    duplicate,
    rejected_untrusted,
    rejected_invalid,
    rejected_conflict,
};

inline const char* to_string(ReceiveOutcome o) {
    switch (o) {
        case ReceiveOutcome::stored: return "stored";
        case ReceiveOutcome::duplicate: return "duplicate";
        case ReceiveOutcome::rejected_untrusted: return "rejected-untrusted";
        case ReceiveOutcome::rejected_invalid: return "rejected-invalid";
        case ReceiveOutcome::rejected_conflict: return "rejected-conflict";
    }
    return "unknown";
}

/// Gossip node state machine: periodic advertisement, update-request
/// handling with a recency check, and validated revocation reception.
///
/// Single-writer contract: timer events and inbound messages must be applied
/// one at a time; handlers never block and return outbound messages for the
/// transport to deliver. PeerId identifies a neighbour (socket address for
/// the UDP runner, node index in the simulator).
template <class PeerId, class PeerHash = std::hash<PeerId>>
class Node {
  public:
    struct ReceiveResult {
        ReceiveOutcome outcome = ReceiveOutcome::rejected_invalid;
        /// Eager push: advertisement to every neighbour, set on fresh stores
        /// when eager_push is enabled.
        std::vector<std::pair<PeerId, wire::Advertisement>> eager_ads;
    };

    struct DatagramResult {
        std::vector<std::pair<PeerId, Bytes>> outbound;
        /// Sets newly accepted into the ARL (for persistence hooks).
        std::vector<Arl::SetPtr> stored;
    };

    explicit Node(NodeConfig config = {}, KeyPair identity = {})
        : config_(config), identity_(std::move(identity)), arl_(config.arl) {
        if (config_.gossip_interval <= 0)
            throw std::invalid_argument("gossip interval must be positive");
        if (config_.gossip_fanout < 1)
            throw std::invalid_argument("gossip fanout must be >= 1");
        if (config_.max_hashes_per_payload < 1)
            throw std::invalid_argument("max hashes per payload must be >= 1");
        if (config_.advertisement_ttl <= 0)
            config_.advertisement_ttl = 5 * config_.gossip_interval;
    }

    const NodeConfig& config() const { return config_; }
    const KeyPair& identity() const { return identity_; }
    TrustedIssuerStorage& tis() { return tis_; }
    const TrustedIssuerStorage& tis() const { return tis_; }
    Arl& arl() { return arl_; }
    const Arl& arl() const { return arl_; }

    void set_neighbours(std::vector<PeerId> neighbours) {
        neighbours_ = std::move(neighbours);
    }
    const std::vector<PeerId>& neighbours() const { return neighbours_; }

    /// One advertisement entry per trusted issuer with a contiguous prefix
    /// of versions held, carrying the highest contiguous version. Entries
    /// round-robin when more issuers qualify than fit in one message.
    wire::Advertisement build_advertisement() {
        std::vector<wire::AdEntry> eligible;
        for (const auto& issuer : arl_.issuers()) {
            if (!tis_.contains(issuer)) continue;
            Version v = arl_.highest_contiguous_version(issuer);
            if (v >= 1) eligible.push_back({issuer.digest, v});
        }
        wire::Advertisement ad;
        if (eligible.empty()) return ad;
        if (eligible.size() <= config_.max_ad_entries) {
            ad.entries = std::move(eligible);
            return ad;
        }
        ad.entries.reserve(config_.max_ad_entries);
        std::size_t start = ad_cursor_ % eligible.size();
        for (std::size_t i = 0; i < config_.max_ad_entries; ++i)
            ad.entries.push_back(eligible[(start + i) % eligible.size()]);
        ad_cursor_ = (start + config_.max_ad_entries) % eligible.size();
        return ad;
    }

    /// One gossip round: advertise to min(n_g, |neighbours|) distinct peers
    /// chosen uniformly at random. Bloom-only nodes send no advertisements.
    template <class Rng>
    std::vector<std::pair<PeerId, wire::Advertisement>> gossip_tick(Micros now,
                                                                    Rng& rng) {
        std::vector<std::pair<PeerId, wire::Advertisement>> out;
        if (arl_.mode() == ArlMode::bloom_only || neighbours_.empty()) return out;
        wire::Advertisement ad = build_advertisement();
        std::size_t k = std::min<std::size_t>(config_.gossip_fanout, neighbours_.size());
        // Partial Fisher-Yates over an index scratch keeps the neighbour
        // list itself stable.
        std::vector<std::uint32_t> idx(neighbours_.size());
        for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
            std::swap(idx[i], idx[pick(rng)]);
            const PeerId& peer = neighbours_[idx[i]];
            note_advertised(peer, now, ad);
            out.emplace_back(peer, ad);
        }
        return out;
    }

    /// Reply to an advertisement: for each trusted issuer whose advertised
    /// version is at least our lowest missing version, request that lowest
    /// missing version. Unknown issuers are ignored silently.
    std::optional<wire::UpdateRequest> handle_advertisement(
        Micros /*now*/, const PeerId& /*from*/, const wire::Advertisement& ad) {
        wire::UpdateRequest req;
        // Dedup entries per issuer, keeping the highest advertised version.
        std::unordered_map<Digest256, Version, Digest256Hash> best;
        for (const auto& e : ad.entries) {
            auto [it, fresh] = best.try_emplace(e.issuer_digest, e.latest_version);
            if (!fresh && e.latest_version > it->second) it->second = e.latest_version;
        }
        for (const auto& e : ad.entries) {
            auto it = best.find(e.issuer_digest);
            if (it == best.end()) continue;
            Version advertised = it->second;
            best.erase(it);
            IssuerId issuer{e.issuer_digest};
            if (!tis_.contains(issuer)) continue;
            Version missing = arl_.lowest_missing_version(issuer);
            if (missing <= advertised) req.entries.push_back({e.issuer_digest, missing});
        }
        if (req.entries.empty()) return std::nullopt;
        return req;
    }

    /// Serves an update request if (and only if) we advertised to the peer
    /// recently; unsolicited requests are refused (anti-amplification).
    /// Every stored set of a requested issuer with version >= the requested
    /// lowest missing version is returned, ascending — intentionally a lower
    /// bound, so already-held versions may be resent.
    std::optional<std::vector<Arl::SetPtr>> handle_update_request(
        Micros now, const PeerId& from, const wire::UpdateRequest& req) {
        if (arl_.mode() == ArlMode::bloom_only) return std::nullopt;
        auto it = peers_.find(from);
        if (it == peers_.end()) return std::nullopt;
        if (now - it->second.last_advertised_to > config_.advertisement_ttl)
            return std::nullopt;
        std::vector<Arl::SetPtr> out;
        std::unordered_map<Digest256, Version, Digest256Hash> lowest;
        for (const auto& e : req.entries) {
            auto [lit, fresh] = lowest.try_emplace(e.issuer_digest, e.lowest_missing);
            if (!fresh && e.lowest_missing < lit->second) lit->second = e.lowest_missing;
        }
        // Served in request order so responses are deterministic.
        for (const auto& e : req.entries) {
            auto lit = lowest.find(e.issuer_digest);
            if (lit == lowest.end()) continue;
            Version from_version = lit->second;
            lowest.erase(lit);
            for (auto& p : arl_.sets_from(IssuerId{e.issuer_digest},
                                          std::max<Version>(from_version, 1)))
                out.push_back(std::move(p));
        }
        return out;
    }

    /// Validated reception: trust check, signature check, then ARL store.
    /// Never throws on adversarial input.
    ReceiveResult receive_revocations(Micros now, Arl::SetPtr payload) {
        ReceiveResult result;
        IssuerId issuer = issuer_id_of(payload->set.issuer_public_key);
        const Bytes* trusted_key = tis_.lookup(issuer);
        if (!trusted_key) {
            result.outcome = ReceiveOutcome::rejected_untrusted;
            return result;
        }
        if (validate_signed_set(*payload) != Validity::valid) {
            result.outcome = ReceiveOutcome::rejected_invalid;
            return result;
        }
        switch (arl_.store(std::move(payload))) {
            case StoreOutcome::duplicate:
                result.outcome = ReceiveOutcome::duplicate;
                return result;
            case StoreOutcome::conflict:
                result.outcome = ReceiveOutcome::rejected_conflict;
                return result;
            case StoreOutcome::stored: break;
        }
        result.outcome = ReceiveOutcome::stored;
        if (config_.eager_push && arl_.mode() != ArlMode::bloom_only) {
            wire::Advertisement ad = build_advertisement();
            result.eager_ads.reserve(neighbours_.size());
            for (const auto& peer : neighbours_) {
                note_advertised(peer, now, ad);
                result.eager_ads.emplace_back(peer, ad);
            }
        }
        return result;
    }

    /// Transport entry point: decode one datagram and run the matching
    /// handler. Malformed input is counted and dropped; the node never
    /// crashes on garbage.
    DatagramResult handle_datagram(Micros now, const PeerId& from, ByteSpan datagram) {
        DatagramResult result;
        wire::DecodeError err;
        auto msg = wire::decode_message(datagram, err);
        if (!msg) {
            ++malformed_count_;
            return result;
        }
        if (auto* ad = std::get_if<wire::Advertisement>(&*msg)) {
            if (auto req = handle_advertisement(now, from, *ad))
                result.outbound.emplace_back(from, wire::encode_message(*req));
            return result;
        }
        if (auto* req = std::get_if<wire::UpdateRequest>(&*msg)) {
            auto payloads = handle_update_request(now, from, *req);
            if (!payloads) {
                ++refused_count_;
                return result;
            }
            for (const auto& p : *payloads)
                result.outbound.emplace_back(from, wire::encode_message(*p));
            return result;
        }
        auto payload = std::make_shared<const SignedRevocationSet>(
            std::get<SignedRevocationSet>(std::move(*msg)));
        auto received = receive_revocations(now, payload);
        if (received.outcome == ReceiveOutcome::stored) result.stored.push_back(payload);
        for (auto& [peer, ad] : received.eager_ads)
            result.outbound.emplace_back(peer, wire::encode_message(ad));
        return result;
    }

    const PeerRecord<PeerId>* peer_record(const PeerId& peer) const {
        auto it = peers_.find(peer);
        return it == peers_.end() ? nullptr : &it->second;
    }

    std::uint64_t malformed_count() const { return malformed_count_; }
    std::uint64_t refused_count() const { return refused_count_; }

  private:
    void note_advertised(const PeerId& peer, Micros now, const wire::Advertisement& ad) {
        auto& record = peers_[peer];
        if (now > record.last_advertised_to) record.last_advertised_to = now;
        record.last_advertisement_content = ad.entries;
    }

    NodeConfig config_;
    KeyPair identity_;
    TrustedIssuerStorage tis_;
    Arl arl_;
    std::vector<PeerId> neighbours_;
    std::unordered_map<PeerId, PeerRecord<PeerId>, PeerHash> peers_;
    std::size_t ad_cursor_ = 0;
    std::uint64_t malformed_count_ = 0;
    std::uint64_t refused_count_ = 0;
};

}  // namespace revo
