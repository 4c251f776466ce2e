#include "zkperm/pairing.hpp"

namespace zkperm {
namespace ec {

using ff::Fq12;
using ff::Fq2;
using ff::Fq6;
using ff::u128;
using ff::u64;

namespace {

// curve family parameter; the ate loop count is 6x + 2
constexpr u64 kFamilyX = 4965661367192848881ull;

struct Ext {
    Fq12 x, y;
};

// embed a twist point into E(Fq12): (x, y) -> (x w^2, y w^3)
Ext untwist(const G2Affine& q) {
    Ext e;
    e.x = Fq12{Fq6{Fq2::zero(), q.x, Fq2::zero()}, Fq6::zero()};
    e.y = Fq12{Fq6::zero(), Fq6{Fq2::zero(), q.y, Fq2::zero()}};
    return e;
}

Fq12 embed_fq(const ff::Fq& a) {
    Fq12 r = Fq12::zero();
    r.c0.c0.c0 = a;
    return r;
}

// line through a and b (or the tangent at a when a == b), evaluated at p
Fq12 line(const Ext& a, const Ext& b, const Fq12& px, const Fq12& py, Ext& out) {
    Fq12 lambda;
    if (a.x == b.x && a.y == b.y) {
        Fq12 x2 = a.x.square();
        lambda = (x2 + x2 + x2) * (a.y + a.y).inverse();
    } else {
        lambda = (b.y - a.y) * (b.x - a.x).inverse();
    }
    Fq12 x3 = lambda.square() - a.x - b.x;
    out.x = x3;
    out.y = lambda * (a.x - x3) - a.y;
    return (py - a.y) - lambda * (px - a.x);
}

std::vector<int> ate_naf() {
    u128 n = (u128)6 * kFamilyX + 2;
    std::vector<int> digits;
    while (n > 0) {
        if (n & 1) {
            int d = 2 - (int)(n & 3);
            digits.push_back(d);
            n -= (u128)d;  // d = -1 adds 1
        } else {
            digits.push_back(0);
        }
        n >>= 1;
    }
    return digits;
}

Ext frobenius_point(const Ext& q) {
    return Ext{q.x.frobenius(), q.y.frobenius()};
}

}  // namespace

Fq12 miller_loop(const G1Affine& p, const G2Affine& q) {
    if (p.infinity || q.infinity) return Fq12::one();

    static const std::vector<int> naf = ate_naf();
    Fq12 px = embed_fq(p.x);
    Fq12 py = embed_fq(p.y);
    Ext base = untwist(q);
    Ext neg_base{base.x, Fq12::zero() - base.y};

    Fq12 f = Fq12::one();
    Ext t = base;
    for (int i = (int)naf.size() - 2; i >= 0; --i) {
        Ext next;
        Fq12 l = line(t, t, px, py, next);
        f = f.square() * l;
        t = next;
        if (naf[i] == 1) {
            l = line(t, base, px, py, next);
            f = f * l;
            t = next;
        } else if (naf[i] == -1) {
            l = line(t, neg_base, px, py, next);
            f = f * l;
            t = next;
        }
    }

    // the two Frobenius correction lines of the optimal ate pairing
    Ext q1 = frobenius_point(base);
    Ext q2 = frobenius_point(q1);
    q2.y = Fq12::zero() - q2.y;
    Ext next;
    f = f * line(t, q1, px, py, next);
    t = next;
    f = f * line(t, q2, px, py, next);
    return f;
}

Fq12 final_exponentiation(const Fq12& f) {
    // easy part: f^((p^6 - 1)(p^2 + 1))
    Fq12 g = f.conjugate() * f.inverse();
    g = g.frobenius().frobenius() * g;
    // hard part: g^((p^4 - p^2 + 1) / r), exponent pinned as limbs
    static const u64 lambda[12] = {
        0xe81bb482ccdf42b1ull, 0x5abf5cc4f49c36d4ull, 0xf1154e7e1da014fdull,
        0xdcc7b44c87cdbacfull, 0xaaa441e3954bcf8aull, 0x6b887d56d5095f23ull,
        0x79581e16f3fd90c6ull, 0x3b1b1355d189227dull, 0x4e529a5861876f6bull,
        0x6c0eb522d5b12278ull, 0x331ec15183177fafull, 0x01baaa710b0759adull};
    return g.pow(std::span<const u64>(lambda, 12));
}

Fq12 pairing(const G1Affine& p, const G2Affine& q) {
    return final_exponentiation(miller_loop(p, q));
}

Fq12 pairing_product(const std::vector<std::pair<G1Affine, G2Affine>>& pairs) {
    Fq12 f = Fq12::one();
    for (const auto& [p, q] : pairs) f = f * miller_loop(p, q);
    return final_exponentiation(f);
}

}  // namespace ec
}  // namespace zkperm
