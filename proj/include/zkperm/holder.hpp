#pragma once

#include "zkperm/policy_circuit.hpp"
#include "zkperm/proofsys.hpp"

namespace zkperm {
namespace holder {

using ff::Fr;

// ===== Zero-knowledge presentations =====
//
// What the holder hands to the chain. Deliberately minimal: the nonce binds
// it to one access attempt, the claim hashes and roots are the statement,
// and the proof covers everything else. No attribute value, subject key, or
// identifier appears, and the issuer signatures ride along only under the
// commit-and-prove scheme where the chain checks them directly.

struct VpZk {
    std::string function_id;
    Fr nonce = Fr::zero();
    std::vector<crypto::HashDigest> claim_hashes;      // one per claim slot
    std::vector<crypto::Signature> claim_signatures;   // commit-and-prove only
    std::vector<crypto::HashDigest> roots;             // per membership condition
    std::int64_t timestamp = 0;                        // 0 when the policy is time-free
    Bytes proof;

    enc::Json to_json() const;
    static VpZk from_json(const enc::Json& j);
};

// The holder declines to prove anything the credential does not support;
// the message names the first obstacle.
class PresentationRefused : public std::runtime_error {
  public:
    explicit PresentationRefused(const std::string& reason)
        : std::runtime_error("refusing to build presentation: " + reason) {}
};

// Clear-text pre-check, witness generation, and proving in one step.
// Artifacts (compiled circuit, proving key) are resolved under artifact_dir
// by the references inside the request record.
VpZk build_presentation(const identity::VerifiableCredential& vc,
                        const crypto::SignatureKeyPair& subject, const policy::VprZk& vpr,
                        const policy::AuxData& aux, const Fr& nonce,
                        proofsys::Backend& backend, const std::filesystem::path& artifact_dir);

}  // namespace holder
}  // namespace zkperm
