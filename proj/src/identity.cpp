#include "zkperm/identity.hpp"

#include <set>

namespace zkperm {
namespace identity {

using enc::Json;

// ===== DIDs =====

std::string did_id_string(const ec::EdPoint& public_key) {
    return crypto::digest_hex(crypto::sha256(crypto::public_key_to_bytes(public_key)));
}

DecentralizedIdentifier create_did(const crypto::SignatureKeyPair& keypair, Registry& registry) {
    DecentralizedIdentifier did;
    did.public_key = keypair.public_key;
    did.id_string = did_id_string(keypair.public_key);

    Json method;
    method["id"] = did.did() + "#key-1";
    method["publicKeyHex"] = to_hex(crypto::public_key_to_bytes(keypair.public_key));
    method["type"] = "EmbeddedEdwardsVerificationKey";
    did.document["id"] = did.did();
    did.document["verificationMethod"] = Json::array({method});

    registry.put(RecordKind::DidDocument, did.id_string, did.document);
    return did;
}

DecentralizedIdentifier resolve_did(const Registry& registry, const std::string& did_or_id) {
    std::string id = did_or_id;
    const std::string prefix = "did:zkperm:";
    if (id.rfind(prefix, 0) == 0) id = id.substr(prefix.size());

    Json doc = registry.get(RecordKind::DidDocument, id);
    DecentralizedIdentifier did;
    did.id_string = id;
    did.document = doc;
    std::string pk_hex =
        doc.at("verificationMethod").at(0).at("publicKeyHex").get<std::string>();
    did.public_key = crypto::public_key_from_bytes(from_hex(pk_hex));
    if (did_id_string(did.public_key) != id)
        throw std::runtime_error("registry document key does not match its identifier");
    return did;
}

// ===== Schemas =====

const AttributeSpec* CredentialSchema::find(const std::string& key) const {
    for (const auto& spec : attribute_specs)
        if (spec.key == key) return &spec;
    return nullptr;
}

Json CredentialSchema::to_json() const {
    Json specs = Json::array();
    for (const auto& s : attribute_specs) {
        Json j;
        j["key"] = s.key;
        j["kind"] = enc::value_kind_name(s.kind);
        j["required"] = s.required;
        specs.push_back(j);
    }
    Json j;
    j["attributes"] = specs;
    j["schemaId"] = schema_id;
    return j;
}

CredentialSchema CredentialSchema::from_json(const Json& j) {
    CredentialSchema s;
    s.schema_id = j.at("schemaId").get<std::string>();
    for (const auto& spec : j.at("attributes")) {
        AttributeSpec a;
        a.key = spec.at("key").get<std::string>();
        a.kind = enc::value_kind_from_name(spec.at("kind").get<std::string>());
        a.required = spec.at("required").get<bool>();
        s.attribute_specs.push_back(a);
    }
    return s;
}

std::string register_schema(const CredentialSchema& schema, Registry& registry) {
    if (schema.schema_id.empty()) throw std::invalid_argument("empty schema id");
    if (schema.attribute_specs.empty())
        throw std::invalid_argument("schema must declare at least one attribute");
    std::set<std::string> keys;
    for (const auto& spec : schema.attribute_specs) {
        if (spec.key.empty()) throw std::invalid_argument("schema attribute with empty key");
        if (!keys.insert(spec.key).second)
            throw std::invalid_argument("duplicate schema key: " + spec.key);
    }
    registry.put(RecordKind::Schema, schema.schema_id, schema.to_json());
    return schema.schema_id;
}

CredentialSchema load_schema(const Registry& registry, const std::string& schema_id) {
    return CredentialSchema::from_json(registry.get(RecordKind::Schema, schema_id));
}

// ===== Claims =====

Bytes claim_encode(const Claim& claim) {
    Bytes out;
    out.reserve(96);
    append(out, crypto::public_key_to_bytes(claim.subject_public_key));
    crypto::HashDigest key_digest = crypto::sha256(
        (const std::uint8_t*)claim.attribute.key.data(), claim.attribute.key.size());
    append(out, key_digest.data(), key_digest.size());
    crypto::HashDigest repr = enc::value_repr(claim.attribute.value);
    append(out, repr.data(), repr.size());
    return out;
}

crypto::HashDigest claim_hash(const Claim& claim) {
    return crypto::hash_canonical(claim_encode(claim));
}

// ===== Credentials =====

static Json claim_to_json(const Claim& c) {
    Json j = c.attribute.to_json();
    j["subject"] = to_hex(crypto::public_key_to_bytes(c.subject_public_key));
    return j;
}

static Claim claim_from_json(const Json& j) {
    Claim c;
    c.subject_public_key = crypto::public_key_from_bytes(from_hex(j.at("subject")));
    c.attribute = enc::Attribute::from_json(j);
    return c;
}

Json VerifiableCredential::to_json() const {
    Json claims_json = Json::array();
    for (const auto& c : claims) claims_json.push_back(claim_to_json(c));
    Json sigs_json = Json::array();
    for (const auto& s : claim_signatures) sigs_json.push_back(to_hex(signature_to_bytes(s)));
    Json j;
    j["claimSignatures"] = sigs_json;
    j["claims"] = claims_json;
    j["issuer"] = to_hex(crypto::public_key_to_bytes(issuer_public_key));
    j["schemaId"] = schema_id;
    return j;
}

VerifiableCredential VerifiableCredential::from_json(const Json& j) {
    VerifiableCredential vc;
    vc.issuer_public_key = crypto::public_key_from_bytes(from_hex(j.at("issuer")));
    vc.schema_id = j.at("schemaId").get<std::string>();
    for (const auto& c : j.at("claims")) vc.claims.push_back(claim_from_json(c));
    for (const auto& s : j.at("claimSignatures"))
        vc.claim_signatures.push_back(crypto::signature_from_bytes(from_hex(s)));
    if (vc.claims.size() != vc.claim_signatures.size())
        throw std::invalid_argument("claim and signature counts differ");
    return vc;
}

const Claim* VerifiableCredential::find_claim(const std::string& key) const {
    for (const auto& c : claims)
        if (c.attribute.key == key) return &c;
    return nullptr;
}

VerifiableCredential issue_credential(const ff::Limbs& issuer_secret,
                                      const ec::EdPoint& subject_public_key,
                                      const std::vector<enc::Attribute>& attributes,
                                      const CredentialSchema& schema) {
    // schema conformance: every attribute declared with the right kind,
    // every required key present, no duplicates
    std::set<std::string> seen;
    for (const auto& attr : attributes) {
        const AttributeSpec* spec = schema.find(attr.key);
        if (!spec) throw std::invalid_argument("attribute not in schema: " + attr.key);
        if (spec->kind != attr.value.kind)
            throw std::invalid_argument("attribute kind mismatch for: " + attr.key);
        if (!seen.insert(attr.key).second)
            throw std::invalid_argument("duplicate attribute: " + attr.key);
    }
    for (const auto& spec : schema.attribute_specs) {
        if (spec.required && !seen.count(spec.key))
            throw std::invalid_argument("missing required attribute: " + spec.key);
    }

    VerifiableCredential vc;
    vc.issuer_public_key = ec::edwards_mul(ec::edwards_base(), issuer_secret);
    vc.schema_id = schema.schema_id;
    for (const auto& attr : attributes) {
        Claim claim;
        claim.subject_public_key = subject_public_key;
        claim.attribute = attr;
        vc.claim_signatures.push_back(
            crypto::ds_sign_digest(issuer_secret, claim_hash(claim)));
        vc.claims.push_back(std::move(claim));
    }
    return vc;
}

bool verify_credential(const VerifiableCredential& vc) {
    if (vc.claims.empty() || vc.claims.size() != vc.claim_signatures.size()) return false;
    for (std::size_t i = 1; i < vc.claims.size(); ++i) {
        if (!(vc.claims[i].subject_public_key == vc.claims[0].subject_public_key)) return false;
    }
    for (std::size_t i = 0; i < vc.claims.size(); ++i) {
        if (!crypto::ds_verify_digest(vc.issuer_public_key, vc.claim_signatures[i],
                                      claim_hash(vc.claims[i])))
            return false;
    }
    return true;
}

}  // namespace identity
}  // namespace zkperm
