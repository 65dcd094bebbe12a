#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace asthmon {

/// FNV-1a 64-bit content digest. Not cryptographic; used to stamp report
/// inputs so reruns can be compared byte-for-byte.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

/// Reads a file in binary and returns its FNV-1a digest as hex.
/// Throws DataError if the file cannot be read.
std::string file_digest_hex(const std::string& path);

}  // namespace asthmon
