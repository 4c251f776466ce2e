#pragma once

#include "zkperm/curve.hpp"
#include "zkperm/sha256.hpp"

namespace zkperm {
namespace crypto {

// ===== Signatures on the embedded Edwards curve =====
//
// Schnorr-style scheme over the twisted Edwards curve whose base field is the
// proving field, so verification is expressible as circuit constraints.
// Challenge hash: SHA-256(R.x ∥ A.x ∥ digest), reduced into the subgroup
// order. Nonces are derived deterministically from (secret key, message).

struct SignatureKeyPair {
    ff::Limbs secret_key;  // scalar modulo the subgroup order, plain form
    ec::EdPoint public_key;
};

struct Signature {
    ec::EdPoint commitment_point;  // R
    ff::Limbs response_scalar;     // S, plain form modulo the subgroup order
};

SignatureKeyPair ds_keygen(const Bytes& seed);

// Signs hash_canonical(message). The 32-byte digest is the value the circuit
// gadget re-derives, so both schemes consume the same signature bytes.
Signature ds_sign(const ff::Limbs& secret_key, const Bytes& message);
Signature ds_sign_digest(const ff::Limbs& secret_key, const HashDigest& digest);

// Total: malformed points or out-of-range scalars return 0, never throw.
bool ds_verify(const ec::EdPoint& public_key, const Signature& sig, const Bytes& message);
bool ds_verify_digest(const ec::EdPoint& public_key, const Signature& sig,
                      const HashDigest& digest);

// challenge scalar e = SHA-256(R.x ∥ A.x ∥ digest) mod subgroup order,
// shared between the native verifier and the circuit gadget
ff::Limbs eddsa_challenge(const ec::EdPoint& r, const ec::EdPoint& a, const HashDigest& digest);

// ===== Serialization =====

Bytes signature_to_bytes(const Signature& sig);           // 64 bytes: R compressed ∥ S
Signature signature_from_bytes(const Bytes& data);        // throws std::invalid_argument
Bytes public_key_to_bytes(const ec::EdPoint& pk);         // 32 bytes compressed
ec::EdPoint public_key_from_bytes(const Bytes& data);     // throws std::invalid_argument

}  // namespace crypto
}  // namespace zkperm
