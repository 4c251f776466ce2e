#pragma once

#include <vector>

#include "zkperm/eddsa.hpp"
#include "zkperm/encoding.hpp"
#include "zkperm/registry.hpp"

namespace zkperm {
namespace identity {

// ===== Decentralized identifiers =====

struct DecentralizedIdentifier {
    std::string method = "zkperm";
    std::string id_string;  // hex of hash of the compressed public key
    ec::EdPoint public_key;
    enc::Json document;

    std::string did() const { return "did:" + method + ":" + id_string; }
};

std::string did_id_string(const ec::EdPoint& public_key);

DecentralizedIdentifier create_did(const crypto::SignatureKeyPair& keypair, Registry& registry);
DecentralizedIdentifier resolve_did(const Registry& registry, const std::string& did_or_id);

// ===== Credential schemas =====

struct AttributeSpec {
    std::string key;
    enc::ValueKind kind = enc::ValueKind::Integer;
    bool required = true;
};

struct CredentialSchema {
    std::string schema_id;
    std::vector<AttributeSpec> attribute_specs;

    const AttributeSpec* find(const std::string& key) const;
    enc::Json to_json() const;
    static CredentialSchema from_json(const enc::Json& j);
};

std::string register_schema(const CredentialSchema& schema, Registry& registry);
CredentialSchema load_schema(const Registry& registry, const std::string& schema_id);

// ===== Claims and credentials =====

struct Claim {
    ec::EdPoint subject_public_key;
    enc::Attribute attribute;
};

// Canonical claim octets: compressed subject key, hash of the attribute key,
// 32-byte value representation. 96 bytes total, two hash blocks, so the
// in-circuit recomputation stays at two compressions per claim.
Bytes claim_encode(const Claim& claim);
crypto::HashDigest claim_hash(const Claim& claim);

struct VerifiableCredential {
    ec::EdPoint issuer_public_key;
    std::string schema_id;
    std::vector<Claim> claims;
    std::vector<crypto::Signature> claim_signatures;

    enc::Json to_json() const;
    static VerifiableCredential from_json(const enc::Json& j);

    const Claim* find_claim(const std::string& key) const;
};

VerifiableCredential issue_credential(const ff::Limbs& issuer_secret,
                                      const ec::EdPoint& subject_public_key,
                                      const std::vector<enc::Attribute>& attributes,
                                      const CredentialSchema& schema);

// 1 iff every signature verifies under the issuer key and all claims share
// one subject. Total: structurally valid but wrong inputs return 0.
bool verify_credential(const VerifiableCredential& vc);

}  // namespace identity
}  // namespace zkperm
