#include "zkperm/eddsa.hpp"

namespace zkperm {
namespace crypto {

using ff::Fr;
using ff::Limbs;

// ===== scalar arithmetic modulo the Edwards subgroup order =====

namespace {

struct ElParams {
    static constexpr Limbs modulus = {0x677297dc392126f1ull, 0xab3eedb83920ee0aull,
                                      0x370a08b6d0302b0bull, 0x060c89ce5c263405ull};
    static constexpr Limbs modulus_minus_2 = {0x677297dc392126efull, 0xab3eedb83920ee0aull,
                                              0x370a08b6d0302b0bull, 0x060c89ce5c263405ull};
};

using Fl = ff::Fp<ElParams>;

Fl scalar_from_digest(const HashDigest& d) {
    return ff::field_from_bytes_reduce<Fl>(d.data());
}

Bytes scalar_bytes(const Limbs& s) {
    Bytes out(32);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j)
            out[(3 - i) * 8 + j] = (std::uint8_t)(s[i] >> (56 - 8 * j));
    return out;
}

Bytes point_x_bytes(const ec::EdPoint& p) {
    Bytes out(32);
    ff::field_to_bytes(p.x, out.data());
    return out;
}

}  // namespace

Limbs eddsa_challenge(const ec::EdPoint& r, const ec::EdPoint& a, const HashDigest& digest) {
    Bytes msg = point_x_bytes(r);
    append(msg, point_x_bytes(a));
    append(msg, digest.data(), digest.size());
    return scalar_from_digest(sha256(msg)).to_limbs();
}

SignatureKeyPair ds_keygen(const Bytes& seed) {
    if (seed.empty()) throw std::invalid_argument("empty keygen seed");
    Bytes material = seed;
    for (std::uint32_t counter = 0;; ++counter) {
        Fl s = scalar_from_digest(sha256(material));
        if (!s.is_zero()) {
            SignatureKeyPair kp;
            kp.secret_key = s.to_limbs();
            kp.public_key = ec::edwards_mul(ec::edwards_base(), kp.secret_key);
            return kp;
        }
        material = seed;
        material.push_back((std::uint8_t)counter);
    }
}

Signature ds_sign_digest(const Limbs& secret_key, const HashDigest& digest) {
    Fl s = Fl::from_limbs(secret_key);
    ec::EdPoint pk = ec::edwards_mul(ec::edwards_base(), secret_key);

    // deterministic nonce: hash of secret scalar and message digest
    Bytes nonce_material = scalar_bytes(secret_key);
    append(nonce_material, digest.data(), digest.size());
    Fl r = scalar_from_digest(sha256(nonce_material));
    while (r.is_zero()) {
        nonce_material.push_back(0x5a);
        r = scalar_from_digest(sha256(nonce_material));
    }

    Signature sig;
    sig.commitment_point = ec::edwards_mul(ec::edwards_base(), r.to_limbs());
    Fl e = Fl::from_limbs(eddsa_challenge(sig.commitment_point, pk, digest));
    sig.response_scalar = (r + e * s).to_limbs();
    return sig;
}

Signature ds_sign(const Limbs& secret_key, const Bytes& message) {
    return ds_sign_digest(secret_key, hash_canonical(message));
}

bool ds_verify_digest(const ec::EdPoint& public_key, const Signature& sig,
                      const HashDigest& digest) {
    if (!ec::edwards_on_curve(public_key) || !ec::edwards_on_curve(sig.commitment_point))
        return false;
    if (ff::limb_cmp(sig.response_scalar, ElParams::modulus) >= 0) return false;

    Limbs e = eddsa_challenge(sig.commitment_point, public_key, digest);
    ec::EdPoint lhs = ec::edwards_mul(ec::edwards_base(), sig.response_scalar);
    ec::EdPoint rhs = ec::edwards_add(sig.commitment_point, ec::edwards_mul(public_key, e));
    return lhs == rhs;
}

bool ds_verify(const ec::EdPoint& public_key, const Signature& sig, const Bytes& message) {
    return ds_verify_digest(public_key, sig, hash_canonical(message));
}

// ===== serialization =====

Bytes signature_to_bytes(const Signature& sig) {
    Bytes out(64);
    ec::edwards_compress(sig.commitment_point, out.data());
    Bytes s = scalar_bytes(sig.response_scalar);
    std::copy(s.begin(), s.end(), out.begin() + 32);
    return out;
}

Signature signature_from_bytes(const Bytes& data) {
    if (data.size() != 64) throw std::invalid_argument("signature must be 64 bytes");
    Signature sig;
    sig.commitment_point = ec::edwards_decompress(data.data());
    Limbs s{};
    for (int i = 0; i < 4; ++i) {
        std::uint64_t w = 0;
        for (int j = 0; j < 8; ++j) w = (w << 8) | data[32 + (3 - i) * 8 + j];
        s[i] = w;
    }
    if (ff::limb_cmp(s, ElParams::modulus) >= 0)
        throw std::invalid_argument("signature scalar out of range");
    sig.response_scalar = s;
    return sig;
}

Bytes public_key_to_bytes(const ec::EdPoint& pk) {
    Bytes out(32);
    ec::edwards_compress(pk, out.data());
    return out;
}

ec::EdPoint public_key_from_bytes(const Bytes& data) {
    if (data.size() != 32) throw std::invalid_argument("public key must be 32 bytes");
    return ec::edwards_decompress(data.data());
}

}  // namespace crypto
}  // namespace zkperm
