#pragma once

#include <map>
#include <optional>

#include "zkperm/identity.hpp"
#include "zkperm/merkle.hpp"

namespace zkperm {
namespace proofsys {
class Backend;
}

namespace policy {

// ===== Conditions =====

enum class Op : std::uint8_t { EQ, NEQ, GT, LT, GEQ, LEQ, IN, NOTIN };

std::string op_name(Op op);
Op op_from_name(const std::string& name);
bool op_is_range(Op op);
bool op_is_membership(Op op);

struct Condition {
    std::string key;
    Op op = Op::EQ;
    enc::AttributeValue value;  // comparison target; offset seconds if time_relative
    std::string set_ref;        // "set:<name>" for IN / NOTIN
    bool time_relative = false;

    enc::Json to_json() const;
    static Condition from_json(const enc::Json& j);
};

// conditions with time_relative compare against (now - offset); the age-18
// rule is (date_of_birth, LEQ, offset 18y)
constexpr std::int64_t kEighteenYearsSeconds = 567993600;

// ===== Membership sets =====
//
// One value set backs both membership operators with two trees of equal
// depth. The IN tree stores the sorted 32-byte value representations as
// leaves. The NOTIN tree stores one leaf per adjacent sorted pair, cyclic:
// (w_1,w_2) ... (w_{k-1},w_k), (w_k,w_1). A non-member falls strictly inside
// exactly one pair; the wrap pair, recognized by second <= first, covers
// everything above the maximum or below the minimum.

class MembershipSet {
  public:
    MembershipSet(std::vector<enc::AttributeValue> values, unsigned depth);

    const crypto::HashDigest& in_root() const { return in_tree_.root(); }
    const crypto::HashDigest& gap_root() const { return gap_tree_.root(); }
    unsigned depth() const { return in_tree_.depth(); }
    std::size_t size() const { return reprs_.size(); }
    const std::vector<enc::AttributeValue>& values() const { return values_; }

    bool contains(const crypto::HashDigest& repr) const;

    std::optional<std::size_t> leaf_index(const crypto::HashDigest& repr) const;
    crypto::MerklePath in_path(std::size_t leaf_index) const { return in_tree_.path(leaf_index); }

    struct GapWitness {
        std::size_t pair_index;
        crypto::HashDigest lower;
        crypto::HashDigest upper;
        crypto::MerklePath path;
    };
    // the pair proving non-membership of repr; nullopt when repr is a member
    std::optional<GapWitness> gap_witness(const crypto::HashDigest& repr) const;

  private:
    std::vector<enc::AttributeValue> values_;
    std::vector<crypto::HashDigest> reprs_;  // sorted ascending as 256-bit integers
    crypto::MerkleTree in_tree_;
    crypto::MerkleTree gap_tree_;
};

crypto::HashDigest gap_pair_leaf(const crypto::HashDigest& lower, const crypto::HashDigest& upper);

// ===== Auxiliary data =====

struct AuxData {
    std::map<std::string, MembershipSet> sets;  // keyed by bare set name
    std::int64_t current_timestamp = 0;

    const MembershipSet& resolve(const std::string& set_ref) const;
};

std::string set_name_from_ref(const std::string& set_ref);

// ===== Plain-evaluation oracle =====

// Clear-text evaluation of one condition against one attribute. Circuit
// satisfiability is tested against this function.
bool comp_check_plain(const enc::Attribute& attribute, const Condition& condition,
                      const AuxData& aux);

// ===== Presentation requests =====

enum class Scheme : std::uint8_t { Baseline, CommitAndProve };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct AuxRootEntry {
    std::string set_name;
    crypto::HashDigest in_root;
    crypto::HashDigest gap_root;
};

struct VprZk {
    std::string function_id;
    std::vector<Condition> conditions;
    Scheme scheme = Scheme::CommitAndProve;
    std::string ecs_ref;          // artifact key of the compiled circuit
    std::string proving_key_ref;  // artifact key of the proving key
    Bytes verification_key;       // serialized verification-key container
    std::vector<AuxRootEntry> aux_roots;
    bool uses_timestamp = false;
    unsigned merkle_depth = 3;

    enc::Json to_json() const;
    static VprZk from_json(const enc::Json& j);
};

// conjunction over all conditions plus the credential authenticity gate
bool evaluate_policy_plain(const identity::VerifiableCredential& vc, const VprZk& vpr,
                           const AuxData& aux);

// Compiles the policy circuit, runs the backend setup, stores circuit and
// proving key under artifact_dir, registers the request record, and returns
// it. Baseline circuits embed issuer_public_key as the in-circuit authority.
VprZk build_vpr(const std::string& function_id, const std::vector<Condition>& conditions,
                Scheme scheme, const identity::CredentialSchema& schema, const AuxData& aux,
                const ec::EdPoint& issuer_public_key, proofsys::Backend& backend,
                identity::Registry& registry, const std::filesystem::path& artifact_dir);

}  // namespace policy
}  // namespace zkperm
