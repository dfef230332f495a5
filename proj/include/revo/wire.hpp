// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "revo/core.hpp"

namespace revo::wire {

// Common header: magic "SR", format version, message type byte.
inline constexpr std::uint8_t kMagic0 = 0x53;
inline constexpr std::uint8_t kMagic1 = 0x52;
inline constexpr std::uint8_t kFormatVersion = 0x01;
inline constexpr std::uint8_t kTypeAdvertisement = 0x01;
inline constexpr std::uint8_t kTypeUpdateRequest = 0x02;
inline constexpr std::uint8_t kTypeRevocationPayload = 0x03;

/// Largest payload of a single UDP datagram; larger encodings are a codec error.
inline constexpr std::size_t kMaxDatagram = 65'507;

struct AdEntry {
    Digest256 issuer_digest;
    Version latest_version = 0;

    auto operator<=>(const AdEntry&) const = default;
};

/// Gossip advertisement: (issuer-key digest -> latest contiguous version held).
struct Advertisement {
    std::vector<AdEntry> entries;

    auto operator<=>(const Advertisement&) const = default;
};

struct RequestEntry {
    Digest256 issuer_digest;
    Version lowest_missing = 0;

    auto operator<=>(const RequestEntry&) const = default;
};

/// Pull reply to an advertisement: (issuer-key digest -> lowest missing version).
struct UpdateRequest {
    std::vector<RequestEntry> entries;

    auto operator<=>(const UpdateRequest&) const = default;
};

using Message = std::variant<Advertisement, UpdateRequest, SignedRevocationSet>;

enum class DecodeError {
    none,
    truncated,
    bad_magic,
    bad_version,
    unknown_type,
    length_overflow,
    trailing_bytes,
};

inline const char* to_string(DecodeError e) {
    switch (e) {
        case DecodeError::none: return "none";
        case DecodeError::truncated: return "truncated";
        case DecodeError::bad_magic: return "bad-magic";
        case DecodeError::bad_version: return "bad-version";
        case DecodeError::unknown_type: return "unknown-type";
        case DecodeError::length_overflow: return "length-overflow";
        case DecodeError::trailing_bytes: return "trailing-bytes";
    }
    return "unknown";
}

inline std::size_t encoded_size(const Advertisement& ad) {
    return 4 + 2 + ad.entries.size() * 40;
}

inline std::size_t encoded_size(const UpdateRequest& req) {
    return 4 + 2 + req.entries.size() * 40;
}

inline std::size_t payload_wire_size(std::size_t public_key_len,
                                     std::size_t hash_count,
                                     std::size_t signature_len) {
    return 4 + 2 + public_key_len + 8 + 8 + 4 + 32 * hash_count + 2 + signature_len;
}

inline std::size_t encoded_size(const SignedRevocationSet& payload) {
    return payload_wire_size(payload.set.issuer_public_key.size(),
                             payload.set.hashes.size(), payload.signature.size());
}

namespace detail {

inline void put_header(Bytes& out, std::uint8_t type) {
    out.push_back(kMagic0);
    out.push_back(kMagic1);
    out.push_back(kFormatVersion);
    out.push_back(type);
}

inline void check_datagram_size(std::size_t size) {
    if (size > kMaxDatagram)
        throw std::length_error("encoded message exceeds max datagram size");
}

}  // namespace detail

inline Bytes encode_message(const Advertisement& ad) {
    if (ad.entries.size() > 0xffff)
        throw std::length_error("advertisement entry count exceeds u16");
    detail::check_datagram_size(encoded_size(ad));
    Bytes out;
    out.reserve(encoded_size(ad));
    detail::put_header(out, kTypeAdvertisement);
    put_u16(out, static_cast<std::uint16_t>(ad.entries.size()));
    for (const auto& e : ad.entries) {
        out.insert(out.end(), e.issuer_digest.bytes.begin(), e.issuer_digest.bytes.end());
        put_u64(out, e.latest_version);
    }
    return out;
}

inline Bytes encode_message(const UpdateRequest& req) {
    if (req.entries.size() > 0xffff)
        throw std::length_error("update request entry count exceeds u16");
    detail::check_datagram_size(encoded_size(req));
    Bytes out;
    out.reserve(encoded_size(req));
    detail::put_header(out, kTypeUpdateRequest);
    put_u16(out, static_cast<std::uint16_t>(req.entries.size()));
    for (const auto& e : req.entries) {
        out.insert(out.end(), e.issuer_digest.bytes.begin(), e.issuer_digest.bytes.end());
        put_u64(out, e.lowest_missing);
    }
    return out;
}

inline Bytes encode_message(const SignedRevocationSet& payload) {
    const auto& set = payload.set;
    if (set.issuer_public_key.size() > 0xffff || payload.signature.size() > 0xffff)
        throw std::length_error("key or signature length exceeds u16");
    if (set.hashes.size() > 0xffffffffu)
        throw std::length_error("hash count exceeds u32");
    detail::check_datagram_size(encoded_size(payload));
    Bytes out;
    out.reserve(encoded_size(payload));
    detail::put_header(out, kTypeRevocationPayload);
    put_u16(out, static_cast<std::uint16_t>(set.issuer_public_key.size()));
    out.insert(out.end(), set.issuer_public_key.begin(), set.issuer_public_key.end());
    put_u64(out, set.version);
    put_u64(out, set.published_at);
    put_u32(out, static_cast<std::uint32_t>(set.hashes.size()));
    for (const auto& h : set.hashes) out.insert(out.end(), h.bytes.begin(), h.bytes.end());
    put_u16(out, static_cast<std::uint16_t>(payload.signature.size()));
    out.insert(out.end(), payload.signature.begin(), payload.signature.end());
    return out;
}

inline Bytes encode_message(const Message& msg) {
    return std::visit([](const auto& m) { return encode_message(m); }, msg);
}

/// Decodes exactly one message from the front of `data`, reporting how many
/// bytes it consumed (so payload logs can be replayed by concatenation).
/// Total over arbitrary input: failures set `error` and return nullopt.
inline std::optional<Message> decode_one(ByteSpan data, std::size_t& consumed,
                                         DecodeError& error) {
    consumed = 0;
    error = DecodeError::none;
    ByteReader r(data);
    std::uint8_t m0, m1, version, type;
    if (!r.read_u8(m0) || !r.read_u8(m1)) {
        error = DecodeError::truncated;
        return std::nullopt;
    }
    if (m0 != kMagic0 || m1 != kMagic1) {
        error = DecodeError::bad_magic;
        return std::nullopt;
    }
    if (!r.read_u8(version) || !r.read_u8(type)) {
        error = DecodeError::truncated;
        return std::nullopt;
    }
    if (version != kFormatVersion) {
        error = DecodeError::bad_version;
        return std::nullopt;
    }

    if (type == kTypeAdvertisement || type == kTypeUpdateRequest) {
        std::uint16_t count;
        if (!r.read_u16(count)) {
            error = DecodeError::truncated;
            return std::nullopt;
        }
        if (r.remaining() < static_cast<std::size_t>(count) * 40) {
            error = DecodeError::truncated;
            return std::nullopt;
        }
        if (type == kTypeAdvertisement) {
            Advertisement ad;
            ad.entries.resize(count);
            for (auto& e : ad.entries) {
                r.read_digest(e.issuer_digest);
                r.read_u64(e.latest_version);
            }
            consumed = r.position();
            return Message{std::move(ad)};
        }
        UpdateRequest req;
        req.entries.resize(count);
        for (auto& e : req.entries) {
            r.read_digest(e.issuer_digest);
            r.read_u64(e.lowest_missing);
        }
        consumed = r.position();
        return Message{std::move(req)};
    }

    if (type == kTypeRevocationPayload) {
        SignedRevocationSet payload;
        std::uint16_t pk_len;
        std::uint32_t hash_count;
        std::uint16_t sig_len;
        if (!r.read_u16(pk_len) ||
            !r.read_bytes(pk_len, payload.set.issuer_public_key) ||
            !r.read_u64(payload.set.version) ||
            !r.read_u64(payload.set.published_at) || !r.read_u32(hash_count)) {
            error = DecodeError::truncated;
            return std::nullopt;
        }
        if (r.remaining() < static_cast<std::uint64_t>(hash_count) * 32) {
            error = DecodeError::truncated;
            return std::nullopt;
        }
        payload.set.hashes.resize(hash_count);
        for (auto& h : payload.set.hashes) r.read_digest(h);
        if (!r.read_u16(sig_len) || !r.read_bytes(sig_len, payload.signature)) {
            error = DecodeError::truncated;
            return std::nullopt;
        }
        consumed = r.position();
        return Message{std::move(payload)};
    }

    error = DecodeError::unknown_type;
    return std::nullopt;
}

/// Decodes a datagram that must contain exactly one message.
inline std::optional<Message> decode_message(ByteSpan data, DecodeError& error) {
    if (data.size() > kMaxDatagram) {
        error = DecodeError::length_overflow;
        return std::nullopt;
    }
    std::size_t consumed = 0;
    auto msg = decode_one(data, consumed, error);
    if (!msg) return std::nullopt;
    if (consumed != data.size()) {
        error = DecodeError::trailing_bytes;
        return std::nullopt;
    }
    return msg;
}

inline std::optional<Message> decode_message(ByteSpan data) {
    DecodeError ignored;
    return decode_message(data, ignored);
}

}  // namespace revo::wire
