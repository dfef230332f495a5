// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace revo {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Undirected d-regular graph in CSR form with one latency per link
/// (mirrored on both directed entries).
struct WeightedGraph {
    std::uint32_t node_count = 0;
    std::uint32_t degree = 0;
    std::vector<std::uint64_t> offsets;   // node_count + 1
    std::vector<std::uint32_t> adjacency; // node_count * degree
    std::vector<float> latency_s;         // parallel to adjacency

    std::span<const std::uint32_t> neighbours(std::uint32_t u) const {
        return {adjacency.data() + offsets[u],
                static_cast<std::size_t>(offsets[u + 1] - offsets[u])};
    }
    std::span<const float> latencies(std::uint32_t u) const {
        return {latency_s.data() + offsets[u],
                static_cast<std::size_t>(offsets[u + 1] - offsets[u])};
    }
};

namespace detail {

struct EdgeKeyHash {
    std::size_t operator()(std::uint64_t k) const noexcept {
        return splitmix64(k);
    }
};

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) << 32 | b;
}

/// One configuration-model pairing attempt: shuffle the stub list, pair
/// consecutive stubs, then repair self-loops and duplicate edges by swapping
/// partners with randomly chosen valid pairs. A bad pair never owns an entry
/// in `seen` (self-loops are never inserted, duplicates lost the insert), so
/// repairs only erase the key of the valid pair they swap against.
inline bool pair_stubs(std::uint32_t n, std::uint32_t d, std::mt19937_64& rng,
                       std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::vector<std::uint32_t> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t i = 0; i < d; ++i) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);

    std::size_t edge_count = stubs.size() / 2;
    edges.resize(edge_count);
    std::unordered_set<std::uint64_t, EdgeKeyHash> seen;
    seen.reserve(edge_count * 2);
    std::vector<std::size_t> bad;
    std::vector<std::uint8_t> is_bad(edge_count, 0);
    for (std::size_t i = 0; i < edge_count; ++i) {
        edges[i] = {stubs[2 * i], stubs[2 * i + 1]};
        auto [a, b] = edges[i];
        if (a == b || !seen.insert(edge_key(a, b)).second) {
            bad.push_back(i);
            is_bad[i] = 1;
        }
    }

    std::uniform_int_distribution<std::size_t> any_edge(0, edge_count - 1);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 200 * (bad.size() + 1) + 10'000;
    while (!bad.empty()) {
        if (++attempts > max_attempts) return false;
        std::size_t i = bad.back();
        std::size_t j = any_edge(rng);
        if (i == j || is_bad[j]) continue;
        auto [a, b] = edges[i];
        auto [c, e] = edges[j];
        // Swap partners: (a,b),(c,e) -> (a,e),(c,b).
        if (a == e || c == b) continue;
        if (edge_key(a, e) == edge_key(c, b)) continue;
        if (seen.contains(edge_key(a, e)) || seen.contains(edge_key(c, b))) continue;
        seen.erase(edge_key(c, e));
        seen.insert(edge_key(a, e));
        seen.insert(edge_key(c, b));
        edges[i] = {a, e};
        edges[j] = {c, b};
        is_bad[i] = 0;
        bad.pop_back();
    }
    return true;
}

inline bool is_connected(const WeightedGraph& g) {
    if (g.node_count == 0) return true;
    std::vector<std::uint8_t> seen(g.node_count, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::uint32_t visited = 1;
    while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        for (auto v : g.neighbours(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == g.node_count;
}

}  // namespace detail

/// Seeded d-regular random graph (configuration model with repair), each
/// link weighted with a latency drawn uniformly from [0, latency_max_s).
/// Disconnected outcomes are regenerated from a perturbed seed.
inline WeightedGraph generate_regular_graph(std::uint32_t n, std::uint32_t d,
                                            std::uint64_t seed,
                                            double latency_max_s = 0.020) {
    if (d < 1 || n < d + 1)
        throw std::invalid_argument("regular graph requires n >= d + 1");
    if ((static_cast<std::uint64_t>(n) * d) % 2 != 0)
        throw std::invalid_argument("regular graph requires n * d even");

    std::uint64_t attempt_seed = seed;
    for (int attempt = 0; attempt < 64; ++attempt, attempt_seed = splitmix64(attempt_seed)) {
        std::mt19937_64 rng(attempt_seed);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        if (!detail::pair_stubs(n, d, rng, edges)) continue;

        WeightedGraph g;
        g.node_count = n;
        g.degree = d;
        g.offsets.assign(n + 1, 0);
        for (auto [a, b] : edges) {
            ++g.offsets[a + 1];
            ++g.offsets[b + 1];
        }
        for (std::uint32_t v = 0; v < n; ++v) g.offsets[v + 1] += g.offsets[v];
        g.adjacency.resize(static_cast<std::size_t>(n) * d);
        g.latency_s.resize(g.adjacency.size());
        std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
        std::uniform_real_distribution<double> lat(0.0, latency_max_s);
        for (auto [a, b] : edges) {
            auto w = static_cast<float>(lat(rng));
            g.adjacency[cursor[a]] = b;
            g.latency_s[cursor[a]++] = w;
            g.adjacency[cursor[b]] = a;
            g.latency_s[cursor[b]++] = w;
        }
        if (detail::is_connected(g)) return g;
    }
    throw std::runtime_error("failed to generate a connected regular graph");
}

}  // namespace revo
