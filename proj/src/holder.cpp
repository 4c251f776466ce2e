#include "zkperm/holder.hpp"

namespace zkperm {
namespace holder {

using policy::Condition;
using policy::Op;

// ===== Presentation serialization =====

enc::Json VpZk::to_json() const {
    std::uint8_t nonce_bytes[32];
    ff::field_to_bytes(nonce, nonce_bytes);

    enc::Json hashes = enc::Json::array();
    for (const auto& h : claim_hashes) hashes.push_back(crypto::digest_hex(h));
    enc::Json sigs = enc::Json::array();
    for (const auto& s : claim_signatures) sigs.push_back(to_hex(crypto::signature_to_bytes(s)));
    enc::Json roots_json = enc::Json::array();
    for (const auto& r : roots) roots_json.push_back(crypto::digest_hex(r));

    return enc::Json{{"functionId", function_id},
                     {"nonce", to_hex(nonce_bytes, 32)},
                     {"claimHashes", hashes},
                     {"claimSignatures", sigs},
                     {"roots", roots_json},
                     {"timestamp", timestamp},
                     {"proof", to_hex(proof)}};
}

VpZk VpZk::from_json(const enc::Json& j) {
    VpZk vp;
    vp.function_id = j.at("functionId").get<std::string>();
    const Bytes nonce_bytes = from_hex(j.at("nonce").get<std::string>());
    if (nonce_bytes.size() != 32) throw std::invalid_argument("presentation nonce must be 32 bytes");
    vp.nonce = ff::field_from_bytes_strict<Fr>(nonce_bytes.data());
    for (const auto& h : j.at("claimHashes"))
        vp.claim_hashes.push_back(crypto::digest_from_hex(h.get<std::string>()));
    for (const auto& s : j.at("claimSignatures"))
        vp.claim_signatures.push_back(crypto::signature_from_bytes(from_hex(s.get<std::string>())));
    for (const auto& r : j.at("roots"))
        vp.roots.push_back(crypto::digest_from_hex(r.get<std::string>()));
    vp.timestamp = j.at("timestamp").get<std::int64_t>();
    vp.proof = from_hex(j.at("proof").get<std::string>());
    return vp;
}

// ===== Building =====

namespace {

// index of the claim carrying `key` inside the credential
std::size_t claim_index(const identity::VerifiableCredential& vc, const std::string& key) {
    for (std::size_t i = 0; i < vc.claims.size(); ++i)
        if (vc.claims[i].attribute.key == key) return i;
    throw PresentationRefused("no claim for key '" + key + "'");
}

crypto::HashDigest nonce_digest(const Fr& nonce) {
    crypto::HashDigest d;
    ff::field_to_bytes(nonce, d.data());
    return d;
}

}  // namespace

VpZk build_presentation(const identity::VerifiableCredential& vc,
                        const crypto::SignatureKeyPair& subject, const policy::VprZk& vpr,
                        const policy::AuxData& aux, const Fr& nonce,
                        proofsys::Backend& backend, const std::filesystem::path& artifact_dir) {
    // clear-text pre-flight: never hand the prover a statement that is false
    if (!identity::verify_credential(vc))
        throw PresentationRefused("credential authenticity check failed");
    if (vc.claims.empty() || !(vc.claims[0].subject_public_key == subject.public_key))
        throw PresentationRefused("credential subject does not match the presenting key");

    std::size_t membership_index = 0;
    for (std::size_t ci = 0; ci < vpr.conditions.size(); ++ci) {
        const Condition& cond = vpr.conditions[ci];
        const std::size_t idx = claim_index(vc, cond.key);
        if (policy::op_is_membership(cond.op)) {
            const auto& set = aux.resolve(cond.set_ref);
            const auto& registered = vpr.aux_roots.at(membership_index);
            if (set.in_root() != registered.in_root || set.gap_root() != registered.gap_root)
                throw PresentationRefused("membership set '" + registered.set_name +
                                          "' does not match the registered roots");
            ++membership_index;
        }
        if (!policy::comp_check_plain(vc.claims[idx].attribute, cond, aux))
            throw PresentationRefused("condition " + std::to_string(ci) + " (" +
                                      policy::op_name(cond.op) + " on key '" + cond.key +
                                      "') is not satisfied");
    }

    circuit::CircuitSpec spec;
    spec.conditions = vpr.conditions;
    spec.scheme = vpr.scheme;
    spec.merkle_depth = vpr.merkle_depth;
    spec.issuer_public_key = vc.issuer_public_key;

    const r1cs::ConstraintSystem cs = r1cs::ConstraintSystem::load(artifact_dir / vpr.ecs_ref);

    circuit::WitnessInputs inputs;
    inputs.nonce = nonce;
    inputs.subject_public_key = subject.public_key;
    inputs.key_signature = crypto::ds_sign_digest(subject.secret_key, nonce_digest(nonce));
    inputs.timestamp = vpr.uses_timestamp ? aux.current_timestamp : 0;

    VpZk vp;
    vp.function_id = vpr.function_id;
    vp.nonce = nonce;
    vp.timestamp = inputs.timestamp;

    // one witness slot per distinct condition key
    for (const std::string& key : circuit::claim_keys(spec)) {
        const std::size_t idx = claim_index(vc, key);
        circuit::ClaimWitness cw;
        cw.value_repr = enc::value_repr(vc.claims[idx].attribute.value);
        cw.issuer_signature = vc.claim_signatures[idx];
        inputs.claims.push_back(cw);
        inputs.claim_hashes.push_back(identity::claim_hash(vc.claims[idx]));
        vp.claim_hashes.push_back(inputs.claim_hashes.back());
        if (vpr.scheme == policy::Scheme::CommitAndProve)
            vp.claim_signatures.push_back(vc.claim_signatures[idx]);
    }

    for (const Condition& cond : vpr.conditions) {
        if (!policy::op_is_membership(cond.op)) continue;
        const auto& set = aux.resolve(cond.set_ref);
        const std::size_t idx = claim_index(vc, cond.key);
        const crypto::HashDigest repr = enc::value_repr(vc.claims[idx].attribute.value);
        circuit::MembershipWitness mw;
        if (cond.op == Op::IN) {
            const auto leaf = set.leaf_index(repr);
            if (!leaf) throw PresentationRefused("value for key '" + cond.key +
                                                 "' is not in the registered set");
            mw.path = set.in_path(*leaf);
            inputs.roots.push_back(set.in_root());
        } else {
            const auto gap = set.gap_witness(repr);
            if (!gap) throw PresentationRefused("value for key '" + cond.key +
                                                "' is a member of the excluded set");
            mw.lower = gap->lower;
            mw.upper = gap->upper;
            mw.path = gap->path;
            inputs.roots.push_back(set.gap_root());
        }
        inputs.memberships.push_back(mw);
        vp.roots.push_back(inputs.roots.back());
    }

    const std::vector<Fr> assignment = circuit::generate_witness(spec, cs, inputs);
    vp.proof = backend.prove(cs, artifact_dir / vpr.proving_key_ref, assignment);
    return vp;
}

}  // namespace holder
}  // namespace zkperm
