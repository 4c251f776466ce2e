#pragma once

// Extension tower over the pairing base field:
//   Fq2  = Fq[u]  / (u^2 + 1)
//   Fq6  = Fq2[v] / (v^3 - xi),  xi = 9 + u
//   Fq12 = Fq6[w] / (w^2 - v)
//
// Fq12 is where Miller loop accumulation and the final exponentiation live.

#include "zkperm/field.hpp"

namespace zkperm {
namespace ff {

// ===== Fq2 =================================================================

struct Fq2 {
    Fq c0, c1;  // c0 + c1*u

    static Fq2 zero() { return {Fq::zero(), Fq::zero()}; }
    static Fq2 one() { return {Fq::one(), Fq::zero()}; }
    static Fq2 xi() { return {Fq::from_u64(9), Fq::one()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fq2& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fq2& o) const { return !(*this == o); }

    Fq2 operator+(const Fq2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fq2 operator-(const Fq2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Fq2 operator-() const { return {-c0, -c1}; }
    Fq2 dbl() const { return {c0.dbl(), c1.dbl()}; }

    Fq2 operator*(const Fq2& o) const {
        // Karatsuba over u^2 = -1
        Fq a = c0 * o.c0;
        Fq b = c1 * o.c1;
        Fq s = (c0 + c1) * (o.c0 + o.c1);
        return {a - b, s - a - b};
    }

    Fq2 square() const {
        Fq t0 = (c0 + c1) * (c0 - c1);
        Fq t1 = (c0 * c1).dbl();
        return {t0, t1};
    }

    Fq2 mul_fq(const Fq& k) const { return {c0 * k, c1 * k}; }
    Fq2 conjugate() const { return {c0, -c1}; }

    Fq2 inverse() const {
        Fq norm = c0.square() + c1.square();
        Fq t = norm.inverse();
        return {c0 * t, -(c1 * t)};
    }

    Fq2 pow(std::span<const u64> exp) const {
        Fq2 res = one();
        bool seen = false;
        for (int i = (int)exp.size() - 1; i >= 0; --i)
            for (int b = 63; b >= 0; --b) {
                if (seen) res = res.square();
                if ((exp[i] >> b) & 1) { res = res * *this; seen = true; }
            }
        return res;
    }
    Fq2 pow(const Limbs& e) const { return pow(std::span<const u64>(e.data(), 4)); }
};

// ===== Fq6 =================================================================

struct Fq6 {
    Fq2 c0, c1, c2;  // c0 + c1*v + c2*v^2

    static Fq6 zero() { return {Fq2::zero(), Fq2::zero(), Fq2::zero()}; }
    static Fq6 one() { return {Fq2::one(), Fq2::zero(), Fq2::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fq6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }

    static Fq2 mul_by_xi(const Fq2& a) {
        // (9 + u) * (a0 + a1 u) = (9 a0 - a1) + (9 a1 + a0) u
        Fq t0 = a.c0.dbl().dbl().dbl() + a.c0;
        Fq t1 = a.c1.dbl().dbl().dbl() + a.c1;
        return {t0 - a.c1, t1 + a.c0};
    }

    Fq6 operator+(const Fq6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Fq6 operator-(const Fq6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Fq6 operator-() const { return {-c0, -c1, -c2}; }

    Fq6 operator*(const Fq6& o) const {
        Fq2 v0 = c0 * o.c0;
        Fq2 v1 = c1 * o.c1;
        Fq2 v2 = c2 * o.c2;
        Fq2 t0 = v0 + mul_by_xi((c1 + c2) * (o.c1 + o.c2) - v1 - v2);
        Fq2 t1 = (c0 + c1) * (o.c0 + o.c1) - v0 - v1 + mul_by_xi(v2);
        Fq2 t2 = (c0 + c2) * (o.c0 + o.c2) - v0 - v2 + v1;
        return {t0, t1, t2};
    }

    Fq6 square() const { return *this * *this; }

    // multiply by v: (c0,c1,c2) -> (xi*c2, c0, c1)
    Fq6 mul_by_v() const { return {mul_by_xi(c2), c0, c1}; }

    Fq6 mul_fq2(const Fq2& k) const { return {c0 * k, c1 * k, c2 * k}; }

    Fq6 inverse() const {
        Fq2 a = c0.square() - mul_by_xi(c1 * c2);
        Fq2 b = mul_by_xi(c2.square()) - c0 * c1;
        Fq2 c = c1.square() - c0 * c2;
        Fq2 t = (c0 * a + mul_by_xi(c2 * b + c1 * c)).inverse();
        return {a * t, b * t, c * t};
    }
};

// ===== Fq12 ================================================================

struct Fq12 {
    Fq6 c0, c1;  // c0 + c1*w

    static Fq12 zero() { return {Fq6::zero(), Fq6::zero()}; }
    static Fq12 one() { return {Fq6::one(), Fq6::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fq12& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fq12& o) const { return !(*this == o); }

    Fq12 operator+(const Fq12& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fq12 operator-(const Fq12& o) const { return {c0 - o.c0, c1 - o.c1}; }

    Fq12 operator*(const Fq12& o) const {
        Fq6 a = c0 * o.c0;
        Fq6 b = c1 * o.c1;
        Fq6 s = (c0 + c1) * (o.c0 + o.c1);
        return {a + b.mul_by_v(), s - a - b};
    }

    Fq12 square() const {
        Fq6 t = c0 * c1;
        Fq6 a = (c0 + c1) * (c0 + c1.mul_by_v()) - t - t.mul_by_v();
        return {a, t + t};
    }

    // unitary inverse: valid for elements of norm 1 (post easy-part values)
    Fq12 conjugate() const { return {c0, -c1}; }

    Fq12 inverse() const {
        Fq6 t = (c0.square() - c1.square().mul_by_v()).inverse();
        return {c0 * t, -(c1 * t)};
    }

    Fq12 pow(std::span<const u64> exp) const {
        Fq12 res = one();
        bool seen = false;
        for (int i = (int)exp.size() - 1; i >= 0; --i)
            for (int b = 63; b >= 0; --b) {
                if (seen) res = res.square();
                if ((exp[i] >> b) & 1) { res = res * *this; seen = true; }
            }
        return res;
    }

    // coefficient view as powers of w (w^2 = v), used by Frobenius
    // e_k for k=0..5 correspond to w^k:  e = {c0.c0, c1.c0, c0.c1, c1.c1, c0.c2, c1.c2}
    Fq12 frobenius() const;
};

// Frobenius on Fq2 coefficients embedded at w^k needs gamma_k = xi^{k(p-1)/6}.
// Computed once at startup by exponentiation; see field_tower.cpp.
const std::array<Fq2, 6>& frobenius_gamma();

}  // namespace ff
}  // namespace zkperm
