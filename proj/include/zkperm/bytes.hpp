#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zkperm {

using Bytes = std::vector<std::uint8_t>;

// ===== Hex =====

std::string to_hex(const std::uint8_t* data, std::size_t len);
std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);

// ===== Big-endian integers =====

void store_be64(std::uint8_t out[8], std::uint64_t v);
std::uint64_t load_be64(const std::uint8_t in[8]);

// 32-byte big-endian encoding of a u64 (top 24 bytes zero)
Bytes be256_from_u64(std::uint64_t v);

// ===== Concatenation =====

inline void append(Bytes& dst, const Bytes& src) { dst.insert(dst.end(), src.begin(), src.end()); }
inline void append(Bytes& dst, const std::uint8_t* src, std::size_t len) {
    dst.insert(dst.end(), src, src + len);
}
inline void append(Bytes& dst, const std::string& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

inline Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

}  // namespace zkperm
