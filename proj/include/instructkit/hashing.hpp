#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace ik {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// SHA-256 over length-prefixed fields, so ("ab","c") and ("a","bc") differ.
std::string sha256_fields(std::initializer_list<std::string_view> fields);

/// Seeded 64-bit FNV-1a with a final avalanche mix. Stable across platforms;
/// used for feature hashing and mock determinism, never for identity.
std::uint64_t hash64(std::string_view data, std::uint64_t seed = 0);

}  // namespace ik
