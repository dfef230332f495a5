// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "revo/graph.hpp"
#include "revo/node.hpp"

namespace revo::sim {

/// Seconds to push `bytes` through an uplink of `bandwidth_bps`.
inline double transfer_time(double bytes, double bandwidth_bps) {
    if (bandwidth_bps <= 0) throw std::invalid_argument("bandwidth must be positive");
    return bytes * 8.0 / bandwidth_bps;
}

enum class PropagationMode { eager, periodic };

inline const char* to_string(PropagationMode m) {
    return m == PropagationMode::eager ? "eager" : "periodic";
}

/// Network model: per-link latency plus sender-side upload serialization.
/// Every outgoing message occupies its sender's uplink for
/// transfer_time(size) seconds, FIFO; delivery lands one link latency after
/// the message clears the uplink. Receivers and links impose no extra
/// contention. This is what makes large payloads propagate in rounds of
/// roughly one batch-transfer time each.
struct SimConfig {
    std::uint32_t node_count = 0;
    std::uint32_t degree = 0;
    double latency_max_s = 0.020;        // per-link uniform(0, max)
    double upload_bandwidth_bps = 65e6;  // global average upload speed
    std::uint64_t revocation_count = 340'000;
    std::uint32_t sets_per_batch = 1000;
    std::uint64_t seed = 1;
    std::uint32_t repetitions = 5;
    PropagationMode mode = PropagationMode::eager;
    double time_cap_s = 3600.0;
    /// Simulated CPU cost of validating one received set (0 = free).
    double per_set_cpu_s = 0.0;

    // Periodic (gossip-protocol) mode knobs.
    Micros gossip_interval = 100'000;  // t_g
    int gossip_fanout = 5;             // n_g
    bool periodic_eager_push = false;
    /// Fraction of non-issuer nodes that are silent adversaries: they
    /// receive traffic but never send anything.
    double silent_fraction = 0.0;
    /// Keep simulating this long after convergence (to observe quiescence).
    double extra_time_after_convergence_s = 0.0;
};

struct RepResult {
    std::uint64_t seed = 0;
    double t_full = std::numeric_limits<double>::infinity();
    bool converged = false;
    /// Periodic mode: final ARL contents equal the published sets on every
    /// honest node, and per-issuer advertised versions never decreased.
    bool content_ok = true;
    bool monotone_ok = true;
    std::uint64_t requests_after_convergence = 0;
    std::uint64_t messages_sent = 0;
    std::uint64_t bytes_sent = 0;
    std::vector<double> node_receive_time;
};

struct SimResult {
    SimConfig config;
    std::vector<RepResult> reps;
    double mean_t_full = std::numeric_limits<double>::infinity();
    double mean_messages = 0.0;
    double mean_bytes = 0.0;
    bool all_converged = false;
};

inline void validate(const SimConfig& cfg) {
    if (cfg.node_count < 2) throw std::invalid_argument("need at least 2 nodes");
    if (cfg.degree < 1 || cfg.node_count < cfg.degree + 1)
        throw std::invalid_argument("degree infeasible for node count");
    if ((static_cast<std::uint64_t>(cfg.node_count) * cfg.degree) % 2 != 0)
        throw std::invalid_argument("node_count * degree must be even");
    if (cfg.upload_bandwidth_bps <= 0)
        throw std::invalid_argument("bandwidth must be positive");
    if (cfg.revocation_count < 1) throw std::invalid_argument("need revocations");
    if (cfg.sets_per_batch < 1) throw std::invalid_argument("sets_per_batch >= 1");
    if (cfg.repetitions < 1) throw std::invalid_argument("repetitions >= 1");
    if (cfg.silent_fraction < 0.0 || cfg.silent_fraction >= 1.0)
        throw std::invalid_argument("silent fraction in [0, 1)");
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base + 0x9e3779b97f4a7c15ull * (stream + 1));
}

/// Wire size of the full revocation batch: full sets of `sets_per_batch`
/// hashes plus one remainder set, each as a payload message with a 32-byte
/// key and 64-byte signature.
struct BatchShape {
    std::uint64_t message_count = 0;
    std::uint64_t total_bytes = 0;
};

inline BatchShape batch_shape(std::uint64_t revocation_count, std::uint32_t sets_per_batch) {
    BatchShape shape;
    std::uint64_t full = revocation_count / sets_per_batch;
    std::uint64_t rest = revocation_count % sets_per_batch;
    shape.message_count = full + (rest ? 1 : 0);
    shape.total_bytes = full * wire::payload_wire_size(kPublicKeySize, sets_per_batch,
                                                       kSignatureSize);
    if (rest)
        shape.total_bytes += wire::payload_wire_size(kPublicKeySize, rest, kSignatureSize);
    return shape;
}

namespace detail {

struct EventKey {
    double t;
    std::uint64_t seq;
    bool operator>(const EventKey& o) const {
        return t > o.t || (t == o.t && seq > o.seq);
    }
};

/// Eager engine. The issuer holds the complete batch at t = 0; a node that
/// first completes reception of the batch forwards it once to every
/// neighbour, in random order, through its serialized uplink. Forwarding is
/// deduplicated both ways: a peer the batch was received from is never sent
/// to, and a queued send is dropped once that peer delivers to us first.
/// Node state is a few words, so this engine runs at the full 100k-node
/// scale.
inline RepResult run_eager(const WeightedGraph& g, const SimConfig& cfg,
                           std::uint64_t rep_seed) {
    struct Event {
        EventKey key;
        enum Kind : std::uint8_t { pipe_ready, delivery } kind;
        std::uint32_t node;   // pipe: sender; delivery: receiver
        std::uint32_t from;   // delivery only: sender
        std::uint32_t slot;   // pipe: index into sender's send list
        bool operator>(const Event& o) const { return key > o.key; }
    };

    const std::uint32_t n = g.node_count;
    const BatchShape batch = batch_shape(cfg.revocation_count, cfg.sets_per_batch);
    const double tau = transfer_time(static_cast<double>(batch.total_bytes),
                                     cfg.upload_bandwidth_bps);
    const double cpu = cfg.per_set_cpu_s * static_cast<double>(batch.message_count);

    RepResult rep;
    rep.seed = rep_seed;
    rep.node_receive_time.assign(n, std::numeric_limits<double>::infinity());

    std::mt19937_64 rng(rep_seed);
    std::vector<std::vector<std::pair<std::uint32_t, float>>> sends(n);
    std::vector<std::vector<std::uint32_t>> received_from(n);
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    std::uint64_t seq = 0;
    std::uint32_t informed = 0;

    auto got_from = [&](std::uint32_t node, std::uint32_t peer) {
        const auto& from = received_from[node];
        return std::find(from.begin(), from.end(), peer) != from.end();
    };

    /// Starts the next transfer of `sender`, skipping peers that already
    /// proved they hold the batch by sending it to us.
    auto advance_pipe = [&](std::uint32_t sender, std::uint32_t slot, double t) {
        auto& list = sends[sender];
        while (slot < list.size() && got_from(sender, list[slot].first)) ++slot;
        if (slot < list.size())
            events.push({{t + tau, seq++}, Event::pipe_ready, sender, 0, slot});
    };

    auto become_informed = [&](std::uint32_t v, double t) {
        rep.node_receive_time[v] = t;
        ++informed;
        auto neigh = g.neighbours(v);
        auto lats = g.latencies(v);
        auto& list = sends[v];
        list.reserve(neigh.size());
        for (std::size_t i = 0; i < neigh.size(); ++i)
            if (!got_from(v, neigh[i])) list.emplace_back(neigh[i], lats[i]);
        std::shuffle(list.begin(), list.end(), rng);
        advance_pipe(v, 0, t + cpu);
    };

    become_informed(0, 0.0);
    double now = 0.0;
    while (informed < n && !events.empty()) {
        Event ev = events.top();
        events.pop();
        now = ev.key.t;
        if (now > cfg.time_cap_s) return rep;  // non-convergence reported
        if (ev.kind == Event::pipe_ready) {
            // The slot's transfer just cleared the sender's uplink.
            auto [target, lat] = sends[ev.node][ev.slot];
            rep.messages_sent += batch.message_count;
            rep.bytes_sent += batch.total_bytes;
            events.push({{now + lat, seq++}, Event::delivery, target, ev.node, 0});
            advance_pipe(ev.node, ev.slot + 1, now);
        } else {
            received_from[ev.node].push_back(ev.from);
            if (rep.node_receive_time[ev.node] ==
                std::numeric_limits<double>::infinity())
                become_informed(ev.node, now + cpu);
        }
    }
    if (informed == n) {
        rep.converged = true;
        rep.t_full = now + cpu;
    }
    return rep;
}

/// Periodic engine: every node is a real gossip Node running the actual
/// protocol handlers; only the transport (in-memory events with the same
/// uplink/latency model) and the clock are simulated. Intended for moderate
/// network sizes.
inline RepResult run_periodic(const WeightedGraph& g, const SimConfig& cfg,
                              std::uint64_t rep_seed) {
    using SimNode = Node<std::uint32_t>;
    using SimMsg = std::variant<wire::Advertisement, wire::UpdateRequest, Arl::SetPtr>;

    struct Event {
        EventKey key;
        enum Kind : std::uint8_t { tick, message } kind;
        std::uint32_t to = 0;
        std::uint32_t from = 0;
        SimMsg msg;
        bool operator>(const Event& o) const { return key > o.key; }
    };

    const std::uint32_t n = g.node_count;
    RepResult rep;
    rep.seed = rep_seed;
    rep.node_receive_time.assign(n, std::numeric_limits<double>::infinity());

    std::mt19937_64 rng(rep_seed);

    // Issuer identity and the published sets.
    std::array<std::uint8_t, 32> key_seed;
    for (auto& b : key_seed) b = static_cast<std::uint8_t>(rng());
    KeyPair issuer_keys = keygen(key_seed);
    Issuer issuer(issuer_keys);
    std::vector<Digest256> all_hashes(cfg.revocation_count);
    for (auto& h : all_hashes)
        for (auto& b : h.bytes) b = static_cast<std::uint8_t>(rng());
    std::vector<Arl::SetPtr> published;
    for (auto& s : issuer.issue_batches(all_hashes, cfg.sets_per_batch, 1))
        published.push_back(std::make_shared<const SignedRevocationSet>(std::move(s)));
    const Version top_version = published.back()->set.version;

    // Silent adversaries: receive but never send. The issuer stays honest,
    // and the honest-induced subgraph must stay connected.
    std::vector<std::uint8_t> silent(n, 0);
    std::uint32_t silent_count =
        static_cast<std::uint32_t>(cfg.silent_fraction * (n - 1));
    if (silent_count > 0) {
        std::vector<std::uint32_t> order(n - 1);
        for (std::uint32_t i = 0; i < n - 1; ++i) order[i] = i + 1;
        for (int attempt = 0; attempt < 128; ++attempt) {
            std::shuffle(order.begin(), order.end(), rng);
            std::fill(silent.begin(), silent.end(), 0);
            for (std::uint32_t i = 0; i < silent_count; ++i) silent[order[i]] = 1;
            // Honest subgraph connectivity check.
            std::vector<std::uint8_t> seen(n, 0);
            std::vector<std::uint32_t> stack{0};
            seen[0] = 1;
            std::uint32_t visited = 1;
            while (!stack.empty()) {
                auto u = stack.back();
                stack.pop_back();
                for (auto v : g.neighbours(u))
                    if (!silent[v] && !seen[v]) {
                        seen[v] = 1;
                        ++visited;
                        stack.push_back(v);
                    }
            }
            if (visited == n - silent_count) break;
            if (attempt == 127)
                throw std::runtime_error("could not pick a connected honest subgraph");
        }
    }

    NodeConfig node_cfg;
    node_cfg.gossip_interval = cfg.gossip_interval;
    node_cfg.gossip_fanout = cfg.gossip_fanout;
    node_cfg.max_hashes_per_payload = cfg.sets_per_batch;
    node_cfg.eager_push = cfg.periodic_eager_push;
    node_cfg.arl.expected_capacity = std::max<std::uint64_t>(cfg.revocation_count, 64);

    std::vector<std::unique_ptr<SimNode>> nodes;
    nodes.reserve(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        auto node = std::make_unique<SimNode>(node_cfg);
        node->tis().trust(issuer_keys.public_key);
        node->set_neighbours({g.neighbours(v).begin(), g.neighbours(v).end()});
        nodes.push_back(std::move(node));
    }
    for (const auto& p : published) nodes[0]->arl().store(p);
    rep.node_receive_time[0] = 0.0;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    std::uint64_t seq = 0;
    const double tick_s = static_cast<double>(cfg.gossip_interval) / 1e6;
    std::uniform_real_distribution<double> phase(0.0, tick_s);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (silent[v]) continue;
        events.push({{phase(rng), seq++}, Event::tick, v, 0, {}});
    }

    std::vector<double> pipe_free(n, 0.0);
    std::vector<Version> last_advertised(n, 0);
    std::uint32_t honest_total = n - silent_count;
    std::uint32_t honest_done = 1;  // issuer holds everything already
    double converged_at = std::numeric_limits<double>::infinity();

    auto latency_between = [&](std::uint32_t from, std::uint32_t to) -> double {
        auto neigh = g.neighbours(from);
        auto lats = g.latencies(from);
        for (std::size_t i = 0; i < neigh.size(); ++i)
            if (neigh[i] == to) return lats[i];
        throw std::logic_error("message to a non-neighbour");
    };

    auto send = [&](std::uint32_t from, std::uint32_t to, double now, SimMsg msg,
                    std::size_t size_bytes) {
        if (silent[from]) return;
        double start = std::max(now, pipe_free[from]);
        pipe_free[from] = start + transfer_time(static_cast<double>(size_bytes),
                                                cfg.upload_bandwidth_bps);
        double arrive = pipe_free[from] + latency_between(from, to);
        rep.messages_sent += 1;
        rep.bytes_sent += size_bytes;
        events.push({{arrive, seq++}, Event::message, to, from, std::move(msg)});
    };

    auto on_stored = [&](std::uint32_t v, double now) {
        if (rep.node_receive_time[v] == std::numeric_limits<double>::infinity() &&
            nodes[v]->arl().highest_contiguous_version(issuer.id()) == top_version) {
            rep.node_receive_time[v] = now;
            if (!silent[v] && ++honest_done == honest_total)
                converged_at = now;
        }
    };

    const double cap = cfg.time_cap_s;
    while (!events.empty()) {
        Event ev = events.top();
        events.pop();
        double now = ev.key.t;
        if (now > cap) break;
        if (converged_at < now &&
            now > converged_at + cfg.extra_time_after_convergence_s)
            break;
        Micros now_us = static_cast<Micros>(std::llround(now * 1e6));

        if (ev.kind == Event::tick) {
            auto& node = *nodes[ev.to];
            for (auto& [peer, ad] : node.gossip_tick(now_us, rng)) {
                // Monotone progress: advertised contiguous version never drops.
                for (const auto& e : ad.entries) {
                    if (e.latest_version < last_advertised[ev.to]) rep.monotone_ok = false;
                    last_advertised[ev.to] =
                        std::max(last_advertised[ev.to], e.latest_version);
                }
                send(ev.to, peer, now, ad, wire::encoded_size(ad));
            }
            events.push({{now + tick_s, seq++}, Event::tick, ev.to, 0, {}});
            continue;
        }

        auto& node = *nodes[ev.to];
        if (auto* ad = std::get_if<wire::Advertisement>(&ev.msg)) {
            if (!silent[ev.to]) {
                if (auto req = node.handle_advertisement(now_us, ev.from, *ad)) {
                    if (now > converged_at) ++rep.requests_after_convergence;
                    send(ev.to, ev.from, now, *req, wire::encoded_size(*req));
                }
            }
        } else if (auto* req = std::get_if<wire::UpdateRequest>(&ev.msg)) {
            if (auto payloads = node.handle_update_request(now_us, ev.from, *req))
                for (auto& p : *payloads) {
                    auto size = wire::encoded_size(*p);
                    send(ev.to, ev.from, now, std::move(p), size);
                }
        } else {
            auto& payload = std::get<Arl::SetPtr>(ev.msg);
            double ready = now + cfg.per_set_cpu_s;
            Micros ready_us = static_cast<Micros>(std::llround(ready * 1e6));
            auto result = node.receive_revocations(ready_us, payload);
            if (result.outcome == ReceiveOutcome::stored) {
                on_stored(ev.to, ready);
                for (auto& [peer, ad] : result.eager_ads)
                    send(ev.to, peer, ready, ad, wire::encoded_size(ad));
            }
        }
        if (honest_done == honest_total && cfg.extra_time_after_convergence_s <= 0.0)
            break;
    }

    if (honest_done == honest_total) {
        rep.converged = true;
        rep.t_full = converged_at;
        // Final-content audit: every honest node holds exactly versions
        // 1..top with the published hash sets.
        for (std::uint32_t v = 0; v < n && rep.content_ok; ++v) {
            if (silent[v]) continue;
            auto versions = nodes[v]->arl().versions_of(issuer.id());
            if (versions.size() != published.size()) {
                rep.content_ok = false;
                break;
            }
            for (std::size_t i = 0; i < versions.size(); ++i) {
                auto held = nodes[v]->arl().get(issuer.id(), i + 1);
                if (versions[i] != i + 1 || !held ||
                    held->set.hashes != published[i]->set.hashes) {
                    rep.content_ok = false;
                    break;
                }
            }
        }
    }
    return rep;
}

}  // namespace detail

/// Runs one repetition on an externally supplied graph (mainly for tests).
inline RepResult run_repetition(const WeightedGraph& graph, const SimConfig& cfg,
                                std::uint64_t rep_seed) {
    return cfg.mode == PropagationMode::eager ? detail::run_eager(graph, cfg, rep_seed)
                                              : detail::run_periodic(graph, cfg, rep_seed);
}

/// Full experiment: repetitions with derived seeds, each on a freshly
/// generated graph, averaged.
inline SimResult run_simulation(const SimConfig& cfg) {
    validate(cfg);
    SimResult result;
    result.config = cfg;
    double sum_t = 0, sum_m = 0, sum_b = 0;
    std::uint32_t converged = 0;
    for (std::uint32_t i = 0; i < cfg.repetitions; ++i) {
        std::uint64_t rep_seed = derive_seed(cfg.seed, i);
        WeightedGraph g = generate_regular_graph(cfg.node_count, cfg.degree,
                                                 derive_seed(rep_seed, 0xa11ce),
                                                 cfg.latency_max_s);
        RepResult rep = run_repetition(g, cfg, rep_seed);
        if (rep.converged) {
            ++converged;
            sum_t += rep.t_full;
            sum_m += static_cast<double>(rep.messages_sent);
            sum_b += static_cast<double>(rep.bytes_sent);
        }
        result.reps.push_back(std::move(rep));
    }
    result.all_converged = converged == cfg.repetitions;
    if (converged > 0) {
        result.mean_t_full = sum_t / converged;
        result.mean_messages = sum_m / converged;
        result.mean_bytes = sum_b / converged;
    }
    return result;
}

struct SweepRow {
    std::uint32_t n = 0;
    std::uint32_t d = 0;
    std::string mode;
    std::uint64_t seed = 0;
    std::string rep;  // repetition index, "mean", or "error"
    double t_full = std::numeric_limits<double>::infinity();
    double messages = 0;
    double bytes = 0;
};

/// One row per (n, d, repetition) plus a mean row per cell. Failed cells
/// become rows with rep = "error".
inline std::vector<SweepRow> sweep(const SimConfig& base,
                                   const std::vector<std::uint32_t>& node_counts,
                                   const std::vector<std::uint32_t>& degrees) {
    std::vector<SweepRow> rows;
    for (auto n : node_counts) {
        for (auto d : degrees) {
            SimConfig cfg = base;
            cfg.node_count = n;
            cfg.degree = d;
            SweepRow proto{n, d, to_string(cfg.mode), cfg.seed, "", 0, 0, 0};
            try {
                SimResult res = run_simulation(cfg);
                for (std::size_t i = 0; i < res.reps.size(); ++i) {
                    SweepRow row = proto;
                    row.rep = std::to_string(i);
                    row.t_full = res.reps[i].t_full;
                    row.messages = static_cast<double>(res.reps[i].messages_sent);
                    row.bytes = static_cast<double>(res.reps[i].bytes_sent);
                    rows.push_back(row);
                }
                SweepRow mean = proto;
                mean.rep = "mean";
                mean.t_full = res.mean_t_full;
                mean.messages = res.mean_messages;
                mean.bytes = res.mean_bytes;
                rows.push_back(mean);
            } catch (const std::exception&) {
                SweepRow err = proto;
                err.rep = "error";
                err.t_full = std::numeric_limits<double>::quiet_NaN();
                rows.push_back(err);
            }
        }
    }
    return rows;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "n,d,mode,seed,rep,t_full,messages,bytes\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.d << ',' << r.mode << ',' << r.seed << ',' << r.rep
            << ',';
        if (std::isnan(r.t_full))
            out << "nan";
        else if (std::isinf(r.t_full))
            out << "inf";
        else
            out << r.t_full;
        out << ',' << static_cast<std::uint64_t>(r.messages) << ','
            << static_cast<std::uint64_t>(r.bytes) << '\n';
    }
}

}  // namespace revo::sim
