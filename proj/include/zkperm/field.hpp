#pragma once

// Prime field arithmetic on 4x64-bit limbs in Montgomery form.
//
// Two concrete fields are instantiated here:
//   Fq - base field of the pairing curve (curve coordinates)
//   Fr - scalar field of the pairing curve; this is also the field the
//        constraint system is expressed over, and the coordinate field
//        of the embedded Edwards curve used for signatures.

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>

namespace zkperm {
namespace ff {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// ===== constexpr limb helpers ==============================================

using Limbs = std::array<u64, 4>;

constexpr int limb_cmp(const Limbs& a, const Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

// a += b, returns carry out
constexpr u64 limb_add(Limbs& a, const Limbs& b) {
    u128 c = 0;
    for (int i = 0; i < 4; ++i) {
        c += (u128)a[i] + b[i];
        a[i] = (u64)c;
        c >>= 64;
    }
    return (u64)c;
}

// a -= b, returns borrow out
constexpr u64 limb_sub(Limbs& a, const Limbs& b) {
    u64 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        u64 bi = b[i] + borrow;
        borrow = (bi < b[i]) || (a[i] < bi);
        a[i] = a[i] - bi;
    }
    return borrow;
}

constexpr bool limb_is_zero(const Limbs& a) {
    return a[0] == 0 && a[1] == 0 && a[2] == 0 && a[3] == 0;
}

// 2^k mod m, computed by iterated doubling. Used to derive Montgomery
// constants at compile time.
constexpr Limbs pow2_mod(unsigned k, const Limbs& m) {
    Limbs a{1, 0, 0, 0};
    for (unsigned i = 0; i < k; ++i) {
        u64 carry = limb_add(a, a);
        if (carry || limb_cmp(a, m) >= 0) limb_sub(a, m);
    }
    return a;
}

// -m^{-1} mod 2^64 by Newton iteration
constexpr u64 mont_inv64(u64 m0) {
    u64 x = 1;
    for (int i = 0; i < 6; ++i) x *= 2 - m0 * x;
    return ~x + 1;
}

// ===== Montgomery field element ============================================

template <typename Params>
struct Fp {
    Limbs v{};  // Montgomery residue: value * 2^256 mod p

    static constexpr Limbs modulus = Params::modulus;
    static constexpr u64 inv = mont_inv64(Params::modulus[0]);
    static constexpr Limbs r1 = pow2_mod(256, Params::modulus);
    static constexpr Limbs r2 = pow2_mod(512, Params::modulus);

    constexpr Fp() = default;

    static Fp zero() { return Fp{}; }
    static Fp one() { Fp x; x.v = r1; return x; }

    static Fp from_u64(u64 n) {
        Fp x;
        x.v = {n, 0, 0, 0};
        return mul_raw(x, raw(r2));
    }

    // Interprets the limbs as a plain (non-Montgomery) integer; must be < p.
    static Fp from_limbs(const Limbs& n) {
        Fp x;
        x.v = n;
        return mul_raw(x, raw(r2));
    }

    Limbs to_limbs() const {
        Fp x = mul_raw(*this, raw(Limbs{1, 0, 0, 0}));
        return x.v;
    }

    static constexpr Fp raw(const Limbs& l) { Fp x; x.v = l; return x; }

    bool is_zero() const { return limb_is_zero(v); }
    bool operator==(const Fp& o) const { return v == o.v; }
    bool operator!=(const Fp& o) const { return v != o.v; }

    Fp operator+(const Fp& o) const {
        Fp res = *this;
        u64 carry = limb_add(res.v, o.v);
        if (carry || limb_cmp(res.v, modulus) >= 0) limb_sub(res.v, modulus);
        return res;
    }

    Fp operator-(const Fp& o) const {
        Fp res = *this;
        if (limb_sub(res.v, o.v)) limb_add(res.v, modulus);
        return res;
    }

    Fp operator-() const {
        if (is_zero()) return *this;
        Fp res = raw(modulus);
        limb_sub(res.v, v);
        return res;
    }

    Fp dbl() const { return *this + *this; }

    // CIOS Montgomery multiplication
    static Fp mul_raw(const Fp& a, const Fp& b) {
        u64 t[6] = {0, 0, 0, 0, 0, 0};
        for (int i = 0; i < 4; ++i) {
            u64 carry = 0;
            for (int j = 0; j < 4; ++j) {
                u128 cur = (u128)a.v[i] * b.v[j] + t[j] + carry;
                t[j] = (u64)cur;
                carry = (u64)(cur >> 64);
            }
            u128 cur = (u128)t[4] + carry;
            t[4] = (u64)cur;
            t[5] = (u64)(cur >> 64);

            u64 m = t[0] * inv;
            cur = (u128)m * modulus[0] + t[0];
            carry = (u64)(cur >> 64);
            for (int j = 1; j < 4; ++j) {
                cur = (u128)m * modulus[j] + t[j] + carry;
                t[j - 1] = (u64)cur;
                carry = (u64)(cur >> 64);
            }
            cur = (u128)t[4] + carry;
            t[3] = (u64)cur;
            t[4] = t[5] + (u64)(cur >> 64);
        }
        Fp res;
        res.v = {t[0], t[1], t[2], t[3]};
        if (t[4] || limb_cmp(res.v, modulus) >= 0) limb_sub(res.v, modulus);
        return res;
    }

    Fp operator*(const Fp& o) const { return mul_raw(*this, o); }
    Fp square() const { return mul_raw(*this, *this); }

    Fp& operator+=(const Fp& o) { *this = *this + o; return *this; }
    Fp& operator-=(const Fp& o) { *this = *this - o; return *this; }
    Fp& operator*=(const Fp& o) { *this = *this * o; return *this; }

    // MSB-first square-and-multiply over an arbitrary limb span
    Fp pow(std::span<const u64> exp) const {
        Fp res = one();
        bool seen = false;
        for (int i = (int)exp.size() - 1; i >= 0; --i) {
            for (int b = 63; b >= 0; --b) {
                if (seen) res = res.square();
                if ((exp[i] >> b) & 1) {
                    res = res * *this;
                    seen = true;
                }
            }
        }
        return res;
    }

    Fp pow(const Limbs& exp) const { return pow(std::span<const u64>(exp.data(), 4)); }
    Fp pow(u64 exp) const { return pow(std::span<const u64>(&exp, 1)); }

    Fp inverse() const {
        if (is_zero()) throw std::invalid_argument("field inverse of zero");
        return pow(Params::modulus_minus_2);
    }
};

// ===== concrete fields =====================================================

struct FqParams {
    static constexpr Limbs modulus = {0x3c208c16d87cfd47ull, 0x97816a916871ca8dull,
                                      0xb85045b68181585dull, 0x30644e72e131a029ull};
    static constexpr Limbs modulus_minus_2 = {0x3c208c16d87cfd45ull, 0x97816a916871ca8dull,
                                              0xb85045b68181585dull, 0x30644e72e131a029ull};
};

struct FrParams {
    static constexpr Limbs modulus = {0x43e1f593f0000001ull, 0x2833e84879b97091ull,
                                      0xb85045b68181585dull, 0x30644e72e131a029ull};
    static constexpr Limbs modulus_minus_2 = {0x43e1f593efffffffull, 0x2833e84879b97091ull,
                                              0xb85045b68181585dull, 0x30644e72e131a029ull};
};

using Fq = Fp<FqParams>;
using Fr = Fp<FrParams>;

// sqrt in Fq, valid because q = 3 mod 4. Returns false if no root exists.
bool fq_sqrt(const Fq& a, Fq& out);

// sqrt in Fr by Tonelli-Shanks (r = 1 mod 2^28). Returns false if no root.
bool fr_sqrt(const Fr& a, Fr& out);

// Primitive 2^k-th root of unity in Fr, k <= 28. Derived from the
// multiplicative generator 5.
Fr fr_root_of_unity(unsigned k);

// ===== byte conversions ====================================================

// 32-byte big-endian integer; throws if the value is not below the modulus.
// Canonical encoding used in every serialized structure.
template <typename F>
F field_from_bytes_strict(const std::uint8_t* bytes) {
    Limbs l{};
    for (int i = 0; i < 4; ++i) {
        u64 w = 0;
        for (int j = 0; j < 8; ++j) w = (w << 8) | bytes[(3 - i) * 8 + j];
        l[i] = w;
    }
    if (limb_cmp(l, F::modulus) >= 0) throw std::invalid_argument("field element out of range");
    return F::from_limbs(l);
}

template <typename F>
void field_to_bytes(const F& x, std::uint8_t* bytes) {
    Limbs l = x.to_limbs();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j) bytes[(3 - i) * 8 + j] = (std::uint8_t)(l[i] >> (56 - 8 * j));
}

// Reduces an arbitrary 32-byte big-endian integer mod the field order.
// Used when mapping hash output into a field.
template <typename F>
F field_from_bytes_reduce(const std::uint8_t* bytes) {
    F acc = F::zero();
    F shift = F::from_u64(256);
    for (int i = 0; i < 32; ++i) acc = acc * shift + F::from_u64(bytes[i]);
    return acc;
}

}  // namespace ff
}  // namespace zkperm
