#include "zkperm/field_tower.hpp"

namespace zkperm {
namespace ff {

// ===== square roots ========================================================

bool fq_sqrt(const Fq& a, Fq& out) {
    if (a.is_zero()) { out = Fq::zero(); return true; }
    // q = 3 mod 4: candidate root is a^((q+1)/4)
    static constexpr Limbs e = {0x4f082305b61f3f52ull, 0x65e05aa45a1c72a3ull,
                                0x6e14116da0605617ull, 0x0c19139cb84c680aull};
    Fq cand = a.pow(e);
    if (cand.square() == a) { out = cand; return true; }
    return false;
}

bool fr_sqrt(const Fr& a, Fr& out) {
    if (a.is_zero()) { out = Fr::zero(); return true; }
    // Tonelli-Shanks with r - 1 = 2^28 * t, t odd
    static constexpr Limbs t_odd = {0x9b9709143e1f593full, 0x181585d2833e8487ull,
                                    0x131a029b85045b68ull, 0x000000030644e72eull};
    static constexpr Limbs t_minus_1_half = {0xcdcb848a1f0fac9full, 0x0c0ac2e9419f4243ull,
                                             0x098d014dc2822db4ull, 0x0000000183227397ull};
    Fr z = Fr::from_u64(5).pow(t_odd);  // generator of the 2-Sylow subgroup
    Fr m_x = a.pow(t_minus_1_half);
    Fr b = m_x.square() * a;  // a^t
    Fr x = m_x * a;           // a^((t+1)/2)
    unsigned m = 28;
    while (!(b == Fr::one())) {
        // find least i with b^(2^i) = 1
        unsigned i = 0;
        Fr t2 = b;
        while (!(t2 == Fr::one())) {
            t2 = t2.square();
            if (++i == m) return false;  // not a square
        }
        Fr c = z;
        for (unsigned j = 0; j < m - i - 1; ++j) c = c.square();
        x = x * c;
        z = c.square();
        b = b * z;
        m = i;
    }
    out = x;
    return true;
}

Fr fr_root_of_unity(unsigned k) {
    if (k > 28) throw std::invalid_argument("two-adicity of the scalar field is 28");
    static constexpr Limbs t_odd = {0x9b9709143e1f593full, 0x181585d2833e8487ull,
                                    0x131a029b85045b68ull, 0x000000030644e72eull};
    Fr w = Fr::from_u64(5).pow(t_odd);  // order 2^28
    for (unsigned i = 28; i > k; --i) w = w.square();
    return w;
}

// ===== Fq12 Frobenius ======================================================

const std::array<Fq2, 6>& frobenius_gamma() {
    static const std::array<Fq2, 6> gamma = [] {
        // (p - 1) / 6 as limbs
        Limbs e = FqParams::modulus;
        // subtract 1
        e[0] -= 1;
        // divide the 256-bit value by 6
        u128 rem = 0;
        Limbs q{};
        for (int i = 3; i >= 0; --i) {
            u128 cur = (rem << 64) | e[i];
            q[i] = (u64)(cur / 6);
            rem = cur % 6;
        }
        std::array<Fq2, 6> g;
        g[0] = Fq2::one();
        Fq2 base = Fq2::xi().pow(q);
        for (int k = 1; k < 6; ++k) g[k] = g[k - 1] * base;
        return g;
    }();
    return gamma;
}

Fq12 Fq12::frobenius() const {
    const auto& g = frobenius_gamma();
    Fq12 r;
    r.c0.c0 = c0.c0.conjugate();
    r.c1.c0 = c1.c0.conjugate() * g[1];
    r.c0.c1 = c0.c1.conjugate() * g[2];
    r.c1.c1 = c1.c1.conjugate() * g[3];
    r.c0.c2 = c0.c2.conjugate() * g[4];
    r.c1.c2 = c1.c2.conjugate() * g[5];
    return r;
}

}  // namespace ff
}  // namespace zkperm
