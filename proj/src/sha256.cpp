#include "zkperm/sha256.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace zkperm {
namespace crypto {

const std::array<std::uint32_t, 8> Sha256::kInit = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                                    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

const std::array<std::uint32_t, 64> Sha256::kRound = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

static inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void Sha256::compress(std::uint32_t state[8], const std::uint8_t block[64]) {
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
        w[i] = ((std::uint32_t)block[4 * i] << 24) | ((std::uint32_t)block[4 * i + 1] << 16) |
               ((std::uint32_t)block[4 * i + 2] << 8) | (std::uint32_t)block[4 * i + 3];
    }
    for (int i = 16; i < 64; ++i) {
        std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
    std::uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
    for (int i = 0; i < 64; ++i) {
        std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        std::uint32_t ch = (e & f) ^ (~e & g);
        std::uint32_t t1 = h + s1 + ch + kRound[i] + w[i];
        std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        std::uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
    state[4] += e;
    state[5] += f;
    state[6] += g;
    state[7] += h;
}

void Sha256::reset() {
    for (int i = 0; i < 8; ++i) state_[i] = kInit[i];
    buf_len_ = 0;
    total_len_ = 0;
}

void Sha256::update(const std::uint8_t* data, std::size_t len) {
    total_len_ += len;
    while (len > 0) {
        std::size_t take = 64 - buf_len_;
        if (take > len) take = len;
        std::memcpy(buf_ + buf_len_, data, take);
        buf_len_ += take;
        data += take;
        len -= take;
        if (buf_len_ == 64) {
            compress(state_, buf_);
            buf_len_ = 0;
        }
    }
}

HashDigest Sha256::finish() {
    std::uint64_t bit_len = total_len_ * 8;
    std::uint8_t pad = 0x80;
    update(&pad, 1);
    std::uint8_t zero = 0x00;
    while (buf_len_ != 56) update(&zero, 1);
    std::uint8_t len_be[8];
    store_be64(len_be, bit_len);
    // bypass total_len_ bookkeeping for the length block itself
    std::memcpy(buf_ + 56, len_be, 8);
    compress(state_, buf_);
    HashDigest out;
    for (int i = 0; i < 8; ++i) {
        out[4 * i] = (std::uint8_t)(state_[i] >> 24);
        out[4 * i + 1] = (std::uint8_t)(state_[i] >> 16);
        out[4 * i + 2] = (std::uint8_t)(state_[i] >> 8);
        out[4 * i + 3] = (std::uint8_t)state_[i];
    }
    reset();
    return out;
}

HashDigest sha256(const std::uint8_t* data, std::size_t len) {
    Sha256 h;
    h.update(data, len);
    return h.finish();
}

HashDigest sha256(const Bytes& data) { return sha256(data.data(), data.size()); }

HashDigest hash_canonical(const Bytes& message) { return sha256(message); }

Bytes digest_bytes(const HashDigest& d) { return Bytes(d.begin(), d.end()); }

std::string digest_hex(const HashDigest& d) { return to_hex(d.data(), d.size()); }

HashDigest digest_from_hex(const std::string& hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != 32) throw std::invalid_argument("digest hex must decode to 32 bytes");
    HashDigest d;
    std::copy(raw.begin(), raw.end(), d.begin());
    return d;
}

}  // namespace crypto
}  // namespace zkperm
