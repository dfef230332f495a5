// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "revo/wire.hpp"

namespace revo {

/// The ARL persistence format is an append-only log of wire-encoded
/// revocation payload messages, back to back. Replaying the log through the
/// normal reception path reconstructs the ARL; the Bloom filter is rebuilt
/// as a side effect of storing.
struct ArlLog {
    std::vector<SignedRevocationSet> sets;
    /// Length of the valid prefix. A crash mid-append leaves a truncated
    /// record at the tail; appends must resume at this offset.
    std::uint64_t valid_bytes = 0;
};

inline ArlLog load_arl_log(const std::string& path) {
    ArlLog log;
    std::ifstream in(path, std::ios::binary);
    if (!in) return log;
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t offset = 0;
    while (offset < data.size()) {
        std::size_t consumed = 0;
        wire::DecodeError err;
        auto msg = wire::decode_one(ByteSpan{data}.subspan(offset), consumed, err);
        if (!msg) break;
        auto* payload = std::get_if<SignedRevocationSet>(&*msg);
        if (!payload) break;  // foreign record: stop at the valid prefix
        log.sets.push_back(std::move(*payload));
        offset += consumed;
    }
    log.valid_bytes = offset;
    return log;
}

/// Appends one payload record and flushes it to disk.
inline void append_arl_record(std::ofstream& out, const SignedRevocationSet& payload) {
    Bytes encoded = wire::encode_message(payload);
    out.write(reinterpret_cast<const char*>(encoded.data()),
              static_cast<std::streamsize>(encoded.size()));
    out.flush();
}

/// Opens the log for appending, discarding any truncated tail record first.
inline std::ofstream open_arl_log_for_append(const std::string& path,
                                             std::uint64_t valid_bytes) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::exists(path, ec) && fs::file_size(path, ec) > valid_bytes)
        fs::resize_file(path, valid_bytes, ec);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    return out;
}

}  // namespace revo
