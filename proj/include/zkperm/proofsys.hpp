#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "zkperm/r1cs.hpp"
#include "zkperm/sha256.hpp"

namespace zkperm {
namespace proofsys {

using ff::Fr;

// ===== Proof and key containers =====
//
// Verification keys and proofs travel as self-describing byte containers:
//   magic (4) | backend id (1) | curve id (1) | circuit digest (32) | payload
// The digest pins the exact circuit, so a proof for one policy can never
// verify against another.

enum class BackendId : std::uint8_t { Direct = 1, Succinct = 2 };

constexpr std::uint8_t kCurveId = 1;
constexpr char kVkMagic[4] = {'Z', 'K', 'V', 'K'};
constexpr char kProofMagic[4] = {'Z', 'K', 'P', 'F'};

struct ContainerView {
    BackendId backend;
    crypto::HashDigest circuit_digest;
    const std::uint8_t* payload;
    std::size_t payload_size;
};

Bytes make_container(const char magic[4], BackendId backend, const crypto::HashDigest& digest,
                     const Bytes& payload);
std::optional<ContainerView> parse_container(const Bytes& data, const char magic[4]);

// ===== Backend interface =====

class Backend {
  public:
    virtual ~Backend() = default;

    virtual std::string name() const = 0;
    virtual BackendId id() const = 0;

    // one-time circuit setup; writes the proving key file and returns the
    // verification-key container
    virtual Bytes setup(const r1cs::ConstraintSystem& cs, const crypto::HashDigest& circuit_digest,
                        const Bytes& srs_seed, const std::filesystem::path& pk_path) = 0;

    // full assignment [1, publics, privates] -> proof container; throws
    // std::runtime_error when the assignment does not satisfy the system
    virtual Bytes prove(const r1cs::ConstraintSystem& cs, const std::filesystem::path& pk_path,
                        const std::vector<Fr>& assignment) = 0;

    // total: malformed input of any kind yields false
    virtual bool verify(const Bytes& vk, const std::vector<Fr>& public_input,
                        const Bytes& proof) = 0;
};

// "direct" (clear re-evaluation oracle) or "groth16" (succinct)
std::unique_ptr<Backend> make_backend(const std::string& name);

// backend-dispatching verification; total
bool zk_verify(const Bytes& vk, const std::vector<Fr>& public_input, const Bytes& proof);
std::optional<BackendId> vk_backend(const Bytes& vk);

// fixed test-only randomness seed for reproducible setups
Bytes default_srs_seed();

// ===== Direct backend =====
//
// Transparent testing oracle: the prover re-checks the assignment and tags
// (circuit, public input) with a key carried openly in both keys. It gives
// none of the succinct backend's guarantees and exists so that circuit
// semantics can be exercised quickly and cross-checked in tests.

class DirectBackend final : public Backend {
  public:
    std::string name() const override { return "direct"; }
    BackendId id() const override { return BackendId::Direct; }
    Bytes setup(const r1cs::ConstraintSystem& cs, const crypto::HashDigest& circuit_digest,
                const Bytes& srs_seed, const std::filesystem::path& pk_path) override;
    Bytes prove(const r1cs::ConstraintSystem& cs, const std::filesystem::path& pk_path,
                const std::vector<Fr>& assignment) override;
    bool verify(const Bytes& vk, const std::vector<Fr>& public_input,
                const Bytes& proof) override;
};

}  // namespace proofsys
}  // namespace zkperm
