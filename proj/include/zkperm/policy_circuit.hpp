#pragma once

#include "zkperm/gadgets.hpp"
#include "zkperm/policy.hpp"

namespace zkperm {
namespace circuit {

// ===== Policy circuits =====
//
// One circuit per registered request. Statement (public inputs, in order):
//   nonce | per-claim hash as two 128-bit halves | per-membership-condition
//   root as two halves | block timestamp when any condition is time-relative
// Witness: subject key, the key-binding signature over the nonce bytes,
// claim value representations, membership paths, and, for the baseline
// scheme, one issuer signature per claim checked against the issuer key
// baked in at compile time.

struct CircuitSpec {
    std::vector<policy::Condition> conditions;
    policy::Scheme scheme = policy::Scheme::CommitAndProve;
    unsigned merkle_depth = 3;
    ec::EdPoint issuer_public_key = ec::EdPoint::identity();  // baseline only
};

// distinct condition keys in first-appearance order; one claim slot each
std::vector<std::string> claim_keys(const CircuitSpec& spec);
// claim slot index per condition
std::vector<std::size_t> condition_slots(const CircuitSpec& spec);

bool spec_uses_timestamp(const CircuitSpec& spec);
// number of public inputs, excluding the constant-one wire
unsigned public_input_count(const CircuitSpec& spec);

// binds every compile input; circuits with equal digests are identical
crypto::HashDigest circuit_digest(const CircuitSpec& spec);

r1cs::ConstraintSystem compile_policy_circuit(const CircuitSpec& spec);

struct ClaimWitness {
    crypto::HashDigest value_repr{};
    crypto::Signature issuer_signature{};  // baseline only
};

struct MembershipWitness {
    crypto::HashDigest lower{};  // NOTIN gap bounds; unused for IN
    crypto::HashDigest upper{};
    crypto::MerklePath path;  // IN: leaf path, NOTIN: gap-pair path
};

struct WitnessInputs {
    Fr nonce = Fr::zero();
    ec::EdPoint subject_public_key = ec::EdPoint::identity();
    crypto::Signature key_signature{};           // over the nonce bytes
    std::vector<ClaimWitness> claims;            // one per claim slot
    std::vector<MembershipWitness> memberships;  // one per membership condition
    std::vector<crypto::HashDigest> claim_hashes;
    std::vector<crypto::HashDigest> roots;  // op-matched root per membership condition
    std::int64_t timestamp = 0;
};

// public input vector x_1..x_l (the constant wire is not included)
std::vector<Fr> assemble_public_input(const CircuitSpec& spec, const Fr& nonce,
                                      const std::vector<crypto::HashDigest>& claim_hashes,
                                      const std::vector<crypto::HashDigest>& roots,
                                      std::int64_t timestamp);

// full assignment [1, publics, privates]; throws when structure is off,
// yields an unsatisfying assignment when values are dishonest
std::vector<Fr> generate_witness(const CircuitSpec& spec, const r1cs::ConstraintSystem& cs,
                                 const WitnessInputs& inputs);

}  // namespace circuit
}  // namespace zkperm
