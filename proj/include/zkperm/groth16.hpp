#pragma once

#include "zkperm/proofsys.hpp"

namespace zkperm {
namespace proofsys {

// ===== Succinct backend =====
//
// Pairing-based argument over the BN254 curve with constant-size proofs
// (one G1 + one G2 + one G1 element) and verification cost independent of
// the circuit. The structured reference string is derived deterministically
// from a seed; for production use the seed must come from a multi-party
// ceremony, while tests pin it for reproducibility.
//
// The proving key can run to gigabytes, so it lives in a file and both
// setup and proving stream it in bounded-size chunks instead of holding
// every query point in memory.

class Groth16Backend final : public Backend {
  public:
    std::string name() const override { return "groth16"; }
    BackendId id() const override { return BackendId::Succinct; }
    Bytes setup(const r1cs::ConstraintSystem& cs, const crypto::HashDigest& circuit_digest,
                const Bytes& srs_seed, const std::filesystem::path& pk_path) override;
    Bytes prove(const r1cs::ConstraintSystem& cs, const std::filesystem::path& pk_path,
                const std::vector<Fr>& assignment) override;
    bool verify(const Bytes& vk, const std::vector<Fr>& public_input,
                const Bytes& proof) override;
};

}  // namespace proofsys
}  // namespace zkperm
