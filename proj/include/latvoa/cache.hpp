// Content-addressed result cache: one file per key, atomic replace on write.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "latvoa/common.hpp"

namespace latvoa {

// Returns the stored payload, or nullopt (missing directory counts as a miss).
std::optional<std::string> cache_get(const std::string& dir, const std::string& key);

// Writes via a temporary file and atomic rename; concurrent readers are safe
// and the last writer per key wins.
void cache_put(const std::string& dir, const std::string& key, const std::string& payload);

// Stderr warning used when a payload fails to parse; the entry is recomputed.
void cache_warn_corrupt(const std::string& dir, const std::string& key);

// dim-map payloads: "key value" lines with a checksum trailer
std::string format_dim_map(const std::map<std::string, int64_t>& dims);
std::optional<std::map<std::string, int64_t>> parse_dim_map(const std::string& payload);

}  // namespace latvoa
