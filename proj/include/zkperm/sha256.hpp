#pragma once

#include <array>
#include <cstdint>

#include "zkperm/bytes.hpp"

namespace zkperm {
namespace crypto {

using HashDigest = std::array<std::uint8_t, 32>;

// ===== SHA-256 =====

class Sha256 {
  public:
    Sha256() { reset(); }

    void reset();
    void update(const std::uint8_t* data, std::size_t len);
    void update(const Bytes& data) { update(data.data(), data.size()); }
    HashDigest finish();

    // One compression round over a 64-byte block. Exposed so the circuit
    // gadget and the witness generator share exactly one definition.
    static void compress(std::uint32_t state[8], const std::uint8_t block[64]);

    static const std::array<std::uint32_t, 8> kInit;
    static const std::array<std::uint32_t, 64> kRound;

  private:
    std::uint32_t state_[8];
    std::uint8_t buf_[64];
    std::size_t buf_len_;
    std::uint64_t total_len_;
};

HashDigest sha256(const std::uint8_t* data, std::size_t len);
HashDigest sha256(const Bytes& data);

// SHA-256 of the canonical octet encoding of a message. All digests in the
// system go through this single entry point.
HashDigest hash_canonical(const Bytes& message);

Bytes digest_bytes(const HashDigest& d);
std::string digest_hex(const HashDigest& d);
HashDigest digest_from_hex(const std::string& hex);

}  // namespace crypto
}  // namespace zkperm
