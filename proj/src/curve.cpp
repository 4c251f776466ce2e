#include "zkperm/curve.hpp"

#include <stdexcept>

namespace zkperm {
namespace ec {

using ff::FrParams;
using ff::field_from_bytes_strict;
using ff::field_to_bytes;
using ff::limb_cmp;

// ===== generators and curve constants ======================================

const G1Affine& g1_generator() {
    static const G1Affine g = G1Affine::make(Fq::from_u64(1), Fq::from_u64(2));
    return g;
}

const G2Affine& g2_generator() {
    static const G2Affine g = [] {
        // conventional generator of the r-order subgroup on the twist
        Fq x0 = Fq::from_limbs({0x46debd5cd992f6edull, 0x674322d4f75edaddull,
                                0x426a00665e5c4479ull, 0x1800deef121f1e76ull});
        Fq x1 = Fq::from_limbs({0x97e485b7aef312c2ull, 0xf1aa493335a9e712ull,
                                0x7260bfb731fb5d25ull, 0x198e9393920d483aull});
        Fq y0 = Fq::from_limbs({0x4ce6cc0166fa7daaull, 0xe3d1e7690c43d37bull,
                                0x4aab71808dcb408full, 0x12c85ea5db8c6debull});
        Fq y1 = Fq::from_limbs({0x55acdadcd122975bull, 0xbc4b313370b38ef3ull,
                                0xec9e99ad690c3395ull, 0x090689d0585ff075ull});
        return G2Affine::make(Fq2{x0, x1}, Fq2{y0, y1});
    }();
    return g;
}

const Fq2& g2_coeff_b() {
    static const Fq2 b = Fq2{Fq::from_u64(3), Fq::zero()} * Fq2::xi().inverse();
    return b;
}

bool g1_on_curve(const G1Affine& p) {
    if (p.infinity) return true;
    return p.y.square() == p.x.square() * p.x + Fq::from_u64(3);
}

bool g2_on_curve(const G2Affine& p) {
    if (p.infinity) return true;
    return p.y.square() == p.x.square() * p.x + g2_coeff_b();
}

bool g1_in_subgroup(const G1Affine& p) {
    // the curve group order equals the scalar field order; every point qualifies,
    // but the check stays explicit so deserialization does not rely on that fact
    if (p.infinity) return true;
    return G1::from_affine(p).mul(FrParams::modulus).is_zero();
}

bool g2_in_subgroup(const G2Affine& p) {
    if (p.infinity) return true;
    return G2::from_affine(p).mul(FrParams::modulus).is_zero();
}

G1 g1_mul(const G1Affine& p, const Fr& k) { return G1::from_affine(p).mul(k.to_limbs()); }
G2 g2_mul(const G2Affine& p, const Fr& k) { return G2::from_affine(p).mul(k.to_limbs()); }

// ===== serialization =======================================================

void g1_serialize(const G1Affine& p, std::uint8_t out[33]) {
    if (p.infinity) {
        for (int i = 0; i < 33; ++i) out[i] = 0;
        return;
    }
    out[0] = (std::uint8_t)(0x02 | (p.y.to_limbs()[0] & 1));
    field_to_bytes(p.x, out + 1);
}

G1Affine g1_deserialize(const std::uint8_t in[33]) {
    if (in[0] == 0x00) {
        for (int i = 1; i < 33; ++i)
            if (in[i]) throw std::invalid_argument("malformed infinity encoding");
        return G1Affine{};
    }
    if (in[0] != 0x02 && in[0] != 0x03) throw std::invalid_argument("bad point flag");
    Fq x = field_from_bytes_strict<Fq>(in + 1);
    Fq y;
    if (!fq_sqrt(x.square() * x + Fq::from_u64(3), y))
        throw std::invalid_argument("x is not on the curve");
    if ((y.to_limbs()[0] & 1) != (in[0] & 1)) y = -y;
    G1Affine p = G1Affine::make(x, y);
    if (!g1_on_curve(p)) throw std::invalid_argument("point not on curve");
    return p;
}

void g2_serialize(const G2Affine& p, std::uint8_t out[129]) {
    if (p.infinity) {
        for (int i = 0; i < 129; ++i) out[i] = 0;
        return;
    }
    out[0] = 0x04;
    field_to_bytes(p.x.c0, out + 1);
    field_to_bytes(p.x.c1, out + 33);
    field_to_bytes(p.y.c0, out + 65);
    field_to_bytes(p.y.c1, out + 97);
}

G2Affine g2_deserialize(const std::uint8_t in[129]) {
    if (in[0] == 0x00) {
        for (int i = 1; i < 129; ++i)
            if (in[i]) throw std::invalid_argument("malformed infinity encoding");
        return G2Affine{};
    }
    if (in[0] != 0x04) throw std::invalid_argument("bad point flag");
    Fq2 x{field_from_bytes_strict<Fq>(in + 1), field_from_bytes_strict<Fq>(in + 33)};
    Fq2 y{field_from_bytes_strict<Fq>(in + 65), field_from_bytes_strict<Fq>(in + 97)};
    G2Affine p = G2Affine::make(x, y);
    if (!g2_on_curve(p)) throw std::invalid_argument("point not on curve");
    if (!g2_in_subgroup(p)) throw std::invalid_argument("point not in the r-order subgroup");
    return p;
}

// ===== embedded Edwards curve ==============================================

const Fr& edwards_a() {
    static const Fr a = Fr::from_u64(168700);
    return a;
}

const Fr& edwards_d() {
    static const Fr d = Fr::from_u64(168696);
    return d;
}

const EdPoint& edwards_base() {
    static const EdPoint b = {
        Fr::from_limbs({0x2893f3f6bb957051ull, 0x2ab8d8010534e0b6ull,
                        0x4eacb2e09d6277c1ull, 0x0bb77a6ad63e739bull}),
        Fr::from_limbs({0x4b3c257a872d7d8bull, 0xfce0051fb9e13377ull,
                        0x25572e1cd16bf9edull, 0x25797203f7a0b249ull})};
    return b;
}

const Limbs edwards_subgroup_order = {0x677297dc392126f1ull, 0xab3eedb83920ee0aull,
                                      0x370a08b6d0302b0bull, 0x060c89ce5c263405ull};

bool edwards_on_curve(const EdPoint& p) {
    Fr x2 = p.x.square();
    Fr y2 = p.y.square();
    return edwards_a() * x2 + y2 == Fr::one() + edwards_d() * x2 * y2;
}

EdPoint edwards_add(const EdPoint& a, const EdPoint& b) {
    // complete formulas: no exceptional cases on this curve
    Fr t = edwards_d() * a.x * b.x * a.y * b.y;
    Fr x3 = (a.x * b.y + a.y * b.x) * (Fr::one() + t).inverse();
    Fr y3 = (a.y * b.y - edwards_a() * a.x * b.x) * (Fr::one() - t).inverse();
    return EdPoint{x3, y3};
}

EdPoint edwards_mul(const EdPoint& p, const Limbs& scalar) {
    EdPoint res = EdPoint::identity();
    EdPoint acc = p;
    for (int i = 0; i < 4; ++i)
        for (int b = 0; b < 64; ++b) {
            if ((scalar[i] >> b) & 1) res = edwards_add(res, acc);
            acc = edwards_add(acc, acc);
        }
    return res;
}

EdPoint edwards_mul_bits(const EdPoint& p, const std::vector<bool>& bits) {
    EdPoint res = EdPoint::identity();
    EdPoint acc = p;
    for (bool bit : bits) {
        if (bit) res = edwards_add(res, acc);
        acc = edwards_add(acc, acc);
    }
    return res;
}

bool edwards_in_subgroup(const EdPoint& p) {
    return edwards_mul(p, edwards_subgroup_order).is_identity();
}

void edwards_compress(const EdPoint& p, std::uint8_t out[32]) {
    field_to_bytes(p.y, out);
    if (p.x.to_limbs()[0] & 1) out[0] |= 0x80;
}

EdPoint edwards_decompress(const std::uint8_t in[32]) {
    std::uint8_t buf[32];
    for (int i = 0; i < 32; ++i) buf[i] = in[i];
    bool x_odd = (buf[0] & 0x80) != 0;
    buf[0] &= 0x7f;
    Fr y = field_from_bytes_strict<Fr>(buf);
    // x^2 = (1 - y^2) / (a - d y^2)
    Fr y2 = y.square();
    Fr denom = edwards_a() - edwards_d() * y2;
    if (denom.is_zero()) throw std::invalid_argument("no affine x for this y");
    Fr x2 = (Fr::one() - y2) * denom.inverse();
    Fr x;
    if (!fr_sqrt(x2, x)) throw std::invalid_argument("y does not belong to the curve");
    if (((x.to_limbs()[0] & 1) != 0) != x_odd) x = -x;
    EdPoint p{x, y};
    if (!edwards_on_curve(p)) throw std::invalid_argument("decompressed point not on curve");
    return p;
}

}  // namespace ec
}  // namespace zkperm
