#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "boxverify/bounds.hpp"
#include "boxverify/box.hpp"
#include "boxverify/optimizer.hpp"

namespace boxverify {

// Everything that identifies a bounds computation. Output constraints are
// deliberately not part of the key, so several properties over the same input
// box reuse one bounds file.
struct CacheKey {
    std::string model_digest;  // sha-256 hex of the model bytes
    Box box;
    std::uint64_t seed = 0;
    int samples_per_input = 20;
    OptConfig opt;
};

// 16-hex-digit file stem derived by xor-folding the key components.
std::string cache_key_id(const CacheKey& key);

// Returns the stored bounds (provenance Cache) when a file for this key
// exists, all key fields match and the payload is intact. A corrupt or
// mismatching file warns on stderr and reads as a miss.
std::optional<OutputBounds> cache_lookup(const std::string& dir, const CacheKey& key);

// Atomic write (temp file + rename); concurrent processes may share `dir`.
void cache_store(const std::string& dir, const CacheKey& key, const OutputBounds& bounds);

}  // namespace boxverify
