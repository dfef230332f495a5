// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "revo/core.hpp"

namespace revo {

/// Per-client register of acknowledged issuer public keys. A node only
/// accepts, stores, and propagates revocations from issuers listed here.
class TrustedIssuerStorage {
  public:
    IssuerId trust(ByteSpan public_key) {
        if (public_key.empty() || public_key.size() > 0xffff)
            throw std::invalid_argument("malformed issuer public key");
        IssuerId id = issuer_id_of(public_key);
        entries_.try_emplace(id, Bytes(public_key.begin(), public_key.end()));
        return id;
    }

    bool untrust(const IssuerId& id) { return entries_.erase(id) > 0; }

    /// Stored key, or nullptr when the issuer is not trusted.
    const Bytes* lookup(const IssuerId& id) const {
        auto it = entries_.find(id);
        return it == entries_.end() ? nullptr : &it->second;
    }

    bool contains(const IssuerId& id) const { return entries_.contains(id); }
    std::size_t size() const { return entries_.size(); }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

  private:
    std::unordered_map<IssuerId, Bytes, IssuerIdHash> entries_;
};

/// File format: one hex-encoded public key per line; '#' starts a comment;
/// blank lines ignored.
inline TrustedIssuerStorage load_tis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open TIS file: " + path);
    TrustedIssuerStorage tis;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                                 line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        auto key = from_hex(std::string_view(line).substr(start));
        if (!key || key->empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": not a hex public key");
        tis.trust(*key);
    }
    return tis;
}

inline void save_tis_file(const TrustedIssuerStorage& tis, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write TIS file: " + path);
    out << "# trusted issuer public keys, one per line (hex)\n";
    for (const auto& [id, key] : tis) out << to_hex(key) << "\n";
    if (!out.flush()) throw std::runtime_error("failed writing TIS file: " + path);
}

}  // namespace revo
