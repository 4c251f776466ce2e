#pragma once

// Elliptic curve groups.
//
//   G1 : y^2 = x^3 + 3        over Fq
//   G2 : y^2 = x^3 + 3/xi     over Fq2 (sextic twist of the pairing curve)
//
// plus the embedded twisted Edwards curve over Fr used for in-circuit
// signatures:
//
//   168700 x^2 + y^2 = 1 + 168696 x^2 y^2
//
// Weierstrass points use Jacobian coordinates internally; the point at
// infinity is encoded as Z = 0.

#include "zkperm/field_tower.hpp"

#include <cstdint>
#include <vector>

namespace zkperm {
namespace ec {

using ff::Fq;
using ff::Fq2;
using ff::Fr;
using ff::Limbs;

// ===== short Weierstrass, a = 0 ============================================

template <typename F>
struct Affine {
    F x{}, y{};
    bool infinity = true;

    static Affine make(const F& x, const F& y) { return Affine{x, y, false}; }
    bool operator==(const Affine& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
    Affine neg() const { return infinity ? *this : Affine{x, -y, false}; }
};

template <typename F>
struct Jac {
    F x{}, y{}, z{};  // z = 0 encodes infinity

    static Jac zero() { return Jac{F::one(), F::one(), F::zero()}; }
    static Jac from_affine(const Affine<F>& a) {
        if (a.infinity) return zero();
        return Jac{a.x, a.y, F::one()};
    }
    bool is_zero() const { return z.is_zero(); }

    Jac dbl() const {
        if (is_zero()) return *this;
        F a = x.square();
        F b = y.square();
        F c = b.square();
        F d = ((x + b).square() - a - c).dbl();
        F e = a + a + a;
        F f = e.square();
        F x3 = f - d.dbl();
        F y3 = e * (d - x3) - c.dbl().dbl().dbl();
        F z3 = (y * z).dbl();
        return Jac{x3, y3, z3};
    }

    Jac add(const Jac& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        F z1z1 = z.square();
        F z2z2 = o.z.square();
        F u1 = x * z2z2;
        F u2 = o.x * z1z1;
        F s1 = y * o.z * z2z2;
        F s2 = o.y * z * z1z1;
        if (u1 == u2) {
            if (s1 == s2) return dbl();
            return zero();
        }
        F h = u2 - u1;
        F i = h.dbl().square();
        F j = h * i;
        F r = (s2 - s1).dbl();
        F v = u1 * i;
        F x3 = r.square() - j - v.dbl();
        F y3 = r * (v - x3) - (s1 * j).dbl();
        F z3 = ((z + o.z).square() - z1z1 - z2z2) * h;
        return Jac{x3, y3, z3};
    }

    // mixed addition with an affine point
    Jac madd(const Affine<F>& o) const {
        if (o.infinity) return *this;
        if (is_zero()) return from_affine(o);
        F z1z1 = z.square();
        F u2 = o.x * z1z1;
        F s2 = o.y * z * z1z1;
        if (x == u2) {
            if (y == s2) return dbl();
            return zero();
        }
        F h = u2 - x;
        F hh = h.square();
        F i = hh.dbl().dbl();
        F j = h * i;
        F r = (s2 - y).dbl();
        F v = x * i;
        F x3 = r.square() - j - v.dbl();
        F y3 = r * (v - x3) - (y * j).dbl();
        F z3 = (z + h).square() - z1z1 - hh;
        return Jac{x3, y3, z3};
    }

    Jac neg() const { return Jac{x, -y, z}; }

    Jac mul(const Limbs& scalar) const {
        Jac res = zero();
        bool seen = false;
        for (int i = 3; i >= 0; --i)
            for (int b = 63; b >= 0; --b) {
                if (seen) res = res.dbl();
                if ((scalar[i] >> b) & 1) { res = res.add(*this); seen = true; }
            }
        return res;
    }

    Affine<F> to_affine() const {
        if (is_zero()) return Affine<F>{};
        F zi = z.inverse();
        F zi2 = zi.square();
        return Affine<F>::make(x * zi2, y * zi2 * zi);
    }

    bool operator==(const Jac& o) const {
        if (is_zero() || o.is_zero()) return is_zero() == o.is_zero();
        F z1z1 = z.square();
        F z2z2 = o.z.square();
        return x * z2z2 == o.x * z1z1 && y * o.z * z2z2 == o.y * z * z1z1;
    }
};

// Batch-convert Jacobian points to affine with a single field inversion.
template <typename F>
std::vector<Affine<F>> batch_to_affine(const std::vector<Jac<F>>& pts) {
    std::vector<Affine<F>> out(pts.size());
    std::vector<F> zs;
    zs.reserve(pts.size());
    for (const auto& p : pts) zs.push_back(p.is_zero() ? F::one() : p.z);
    // prefix products
    std::vector<F> pre(pts.size());
    F acc = F::one();
    for (size_t i = 0; i < pts.size(); ++i) { pre[i] = acc; acc = acc * zs[i]; }
    F inv = acc.inverse();
    for (size_t i = pts.size(); i-- > 0;) {
        F zi = inv * pre[i];
        inv = inv * zs[i];
        if (pts[i].is_zero()) { out[i] = Affine<F>{}; continue; }
        F zi2 = zi.square();
        out[i] = Affine<F>::make(pts[i].x * zi2, pts[i].y * zi2 * zi);
    }
    return out;
}

using G1Affine = Affine<Fq>;
using G1 = Jac<Fq>;
using G2Affine = Affine<Fq2>;
using G2 = Jac<Fq2>;

const G1Affine& g1_generator();
const G2Affine& g2_generator();
const Fq2& g2_coeff_b();  // 3 / (9 + u)

bool g1_on_curve(const G1Affine& p);
bool g2_on_curve(const G2Affine& p);
bool g1_in_subgroup(const G1Affine& p);
bool g2_in_subgroup(const G2Affine& p);

G1 g1_mul(const G1Affine& p, const Fr& k);
G2 g2_mul(const G2Affine& p, const Fr& k);

// ===== point serialization =================================================
//
// G1 compressed, 33 bytes: flag byte then big-endian x.
//   flag: 0x00 infinity (x zeroed), 0x02 y even, 0x03 y odd.
// G2 uncompressed, 129 bytes: flag byte (0x00 or 0x04) then x.c0 x.c1 y.c0 y.c1.
// Deserialization validates curve and subgroup membership and throws
// std::invalid_argument on anything malformed.

void g1_serialize(const G1Affine& p, std::uint8_t out[33]);
G1Affine g1_deserialize(const std::uint8_t in[33]);
void g2_serialize(const G2Affine& p, std::uint8_t out[129]);
G2Affine g2_deserialize(const std::uint8_t in[129]);

// ===== embedded twisted Edwards curve ======================================

struct EdPoint {
    Fr x{}, y{};

    static EdPoint identity() { return EdPoint{Fr::zero(), Fr::one()}; }
    bool is_identity() const { return x.is_zero() && y == Fr::one(); }
    bool operator==(const EdPoint& o) const { return x == o.x && y == o.y; }
    bool operator!=(const EdPoint& o) const { return !(*this == o); }
};

const Fr& edwards_a();
const Fr& edwards_d();
const EdPoint& edwards_base();  // generator of the prime-order subgroup

// order of the prime subgroup (251 bits)
extern const Limbs edwards_subgroup_order;

bool edwards_on_curve(const EdPoint& p);
EdPoint edwards_add(const EdPoint& a, const EdPoint& b);
EdPoint edwards_mul(const EdPoint& p, const Limbs& scalar);
EdPoint edwards_mul_bits(const EdPoint& p, const std::vector<bool>& bits);  // little-endian bits
bool edwards_in_subgroup(const EdPoint& p);

// 32 bytes: big-endian y with the top bit carrying the parity of x
void edwards_compress(const EdPoint& p, std::uint8_t out[32]);
EdPoint edwards_decompress(const std::uint8_t in[32]);

}  // namespace ec
}  // namespace zkperm
