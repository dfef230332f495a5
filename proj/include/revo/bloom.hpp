// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "revo/bytes.hpp"
#include "revo/crypto.hpp"

namespace revo {

/// Expected false-positive probability of a Bloom filter with m bits,
/// k hash functions, and n inserted items: (1 - e^(-kn/m))^k.
inline double bloom_fpp(double m_bits, double k_hashes, double n_items) {
    if (m_bits <= 0 || k_hashes < 1) throw std::invalid_argument("bloom_fpp: m > 0, k >= 1");
    if (n_items <= 0) return 0.0;
    return std::pow(1.0 - std::exp(-k_hashes * n_items / m_bits), k_hashes);
}

/// Bits needed to hit a target false-positive probability at capacity n
/// with a fixed k: m = k*n / -ln(1 - p^(1/k)).
inline std::uint64_t bloom_bits_for(std::uint32_t k_hashes, std::uint64_t n_items,
                                    double target_fpp) {
    if (k_hashes < 1 || n_items < 1 || target_fpp <= 0.0 || target_fpp >= 1.0)
        throw std::invalid_argument("bloom_bits_for: k >= 1, n >= 1, 0 < p < 1");
    double denom = -std::log(1.0 - std::pow(target_fpp, 1.0 / k_hashes));
    return static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(k_hashes) * static_cast<double>(n_items) / denom));
}

/// Plain m-bit / k-hash Bloom filter over 32-byte digests. Bit indices come
/// from double hashing: SHA3-256(element || salt) split into two 128-bit
/// halves h1, h2, with index_i = (h1 + i*h2) mod m.
class BloomFilter {
  public:
    BloomFilter(std::uint64_t m_bits, std::uint32_t k_hashes, std::uint64_t salt = 0)
        : m_(m_bits), k_(k_hashes), salt_(salt) {
        if (m_ == 0 || k_ == 0) throw std::invalid_argument("bloom filter: m > 0, k >= 1");
        words_.assign((m_ + 63) / 64, 0);
    }

    void insert(const Digest256& element) {
        each_index(element, [&](std::uint64_t idx) {
            words_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
            return true;
        });
        ++inserted_;
    }

    bool contains(const Digest256& element) const {
        bool hit = true;
        each_index(element, [&](std::uint64_t idx) {
            if (!(words_[idx >> 6] >> (idx & 63) & 1)) {
                hit = false;
                return false;
            }
            return true;
        });
        return hit;
    }

    std::uint64_t bit_count() const { return m_; }
    std::uint32_t hash_count() const { return k_; }
    std::uint64_t salt() const { return salt_; }
    std::uint64_t inserted_count() const { return inserted_; }

    std::uint64_t set_bit_count() const {
        std::uint64_t bits = 0;
        for (auto w : words_) bits += std::popcount(w);
        return bits;
    }

    double occupancy() const {
        return static_cast<double>(set_bit_count()) / static_cast<double>(m_);
    }

  private:
    template <class Fn>
    void each_index(const Digest256& element, Fn&& fn) const {
        Bytes buf(element.bytes.begin(), element.bytes.end());
        put_u64(buf, salt_);
        Digest256 d = sha3_256(buf);
        auto half = [&](int offset) {
            unsigned __int128 v = 0;
            for (int i = 0; i < 16; ++i) v = v << 8 | d.bytes[offset + i];
            return v;
        };
        unsigned __int128 h1 = half(0), h2 = half(16);
        for (std::uint32_t i = 0; i < k_; ++i) {
            auto idx = static_cast<std::uint64_t>((h1 + i * h2) % m_);
            if (!fn(idx)) return;
        }
    }

    std::uint64_t m_;
    std::uint32_t k_;
    std::uint64_t salt_;
    std::uint64_t inserted_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace revo
