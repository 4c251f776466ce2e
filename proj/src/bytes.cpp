#include "zkperm/bytes.hpp"

namespace zkperm {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(const std::uint8_t* data, std::size_t len) {
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(kHexDigits[data[i] >> 4]);
        out.push_back(kHexDigits[data[i] & 0xf]);
    }
    return out;
}

std::string to_hex(const Bytes& data) { return to_hex(data.data(), data.size()); }

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back((std::uint8_t)((hi << 4) | lo));
    }
    return out;
}

void store_be64(std::uint8_t out[8], std::uint64_t v) {
    for (int i = 7; i >= 0; --i) {
        out[i] = (std::uint8_t)(v & 0xff);
        v >>= 8;
    }
}

std::uint64_t load_be64(const std::uint8_t in[8]) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
    return v;
}

Bytes be256_from_u64(std::uint64_t v) {
    Bytes out(32, 0);
    store_be64(out.data() + 24, v);
    return out;
}

}  // namespace zkperm
