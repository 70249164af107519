#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace uipref {

/// Lowercase hex SHA-256 of the bytes. Used as the content address of blobs.
std::string sha256_hex(std::string_view bytes);

std::uint64_t fnv1a64(std::string_view bytes);

/// One step of the splitmix64 finalizer; used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x);

std::string base64_encode(std::string_view bytes);
/// Throws a validation error on malformed input.
std::string base64_decode(std::string_view text);

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

}  // namespace uipref
