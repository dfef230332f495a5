// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace revo {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

/// Fixed 32-byte digest. Used both for credential hashes and for issuer-key
/// digests; ordering is lexicographic over the raw bytes.
struct Digest256 {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Digest256&) const = default;
};

struct Digest256Hash {
    std::size_t operator()(const Digest256& d) const noexcept {
        std::size_t h;
        std::memcpy(&h, d.bytes.data(), sizeof(h));
        return h;
    }
};

inline std::string to_hex(ByteSpan data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline std::string to_hex(const Digest256& d) { return to_hex(ByteSpan{d.bytes}); }

inline std::optional<Bytes> from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

inline std::optional<Digest256> digest_from_hex(std::string_view hex) {
    auto raw = from_hex(hex);
    if (!raw || raw->size() != 32) return std::nullopt;
    Digest256 d;
    std::memcpy(d.bytes.data(), raw->data(), 32);
    return d;
}

// Big-endian primitives shared by the signing preimage and the wire codec.
inline void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(Bytes& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void put_u64(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

/// Bounds-checked sequential reader. Every read reports failure instead of
/// touching memory past the end, so decoders stay total on garbage input.
class ByteReader {
  public:
    explicit ByteReader(ByteSpan data) : data_(data) {}

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    bool read_u8(std::uint8_t& v) {
        if (remaining() < 1) return false;
        v = data_[pos_++];
        return true;
    }

    bool read_u16(std::uint16_t& v) {
        if (remaining() < 2) return false;
        v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
        pos_ += 2;
        return true;
    }

    bool read_u32(std::uint32_t& v) {
        if (remaining() < 4) return false;
        v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
        pos_ += 4;
        return true;
    }

    bool read_u64(std::uint64_t& v) {
        if (remaining() < 8) return false;
        v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + i];
        pos_ += 8;
        return true;
    }

    bool read_bytes(std::size_t n, Bytes& out) {
        if (remaining() < n) return false;
        out.assign(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return true;
    }

    bool read_digest(Digest256& out) {
        if (remaining() < 32) return false;
        std::memcpy(out.bytes.data(), data_.data() + pos_, 32);
        pos_ += 32;
        return true;
    }

  private:
    ByteSpan data_;
    std::size_t pos_ = 0;
};

}  // namespace revo
