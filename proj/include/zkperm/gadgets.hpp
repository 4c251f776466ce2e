#pragma once

#include <span>

#include "zkperm/curve.hpp"
#include "zkperm/eddsa.hpp"
#include "zkperm/merkle.hpp"
#include "zkperm/r1cs.hpp"

namespace zkperm {
namespace circuit {

using ff::Fr;
using r1cs::CircuitCtx;
using r1cs::LinComb;
using r1cs::u32;

// ===== Linear-combination helpers =====

const Fr& pow2(unsigned k);  // 2^k as a field element, k < 256

inline LinComb lc_one() { return {{0u, Fr::one()}}; }
inline LinComb lc_const(const Fr& c) { return {{0u, c}}; }
inline LinComb lc_var(u32 var) { return {{var, Fr::one()}}; }

inline LinComb lc_sub(LinComb a, const LinComb& b) {
    for (const auto& [var, coeff] : b) a.emplace_back(var, -coeff);
    return a;
}

inline LinComb lc_add(LinComb a, const LinComb& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// ===== Circuit bits =====
//
// A bit is either a compile-time constant or a wire with an optional
// negation, so xor-with-constant, select-between-constants and similar
// patterns fold away instead of spending constraints. Wires appearing here
// are always boolean: fresh ones get a b(1-b)=0 constraint, derived ones
// (xor, and, select of booleans) are boolean by construction.

struct Bit {
    bool is_const = true;
    bool const_value = false;
    u32 var = 0;
    bool negated = false;

    static Bit constant(bool v) {
        Bit b;
        b.is_const = true;
        b.const_value = v;
        return b;
    }
    static Bit wire(u32 var) {
        Bit b;
        b.is_const = false;
        b.var = var;
        return b;
    }
};

using BitVec = std::vector<Bit>;

Bit alloc_bit(CircuitCtx& ctx, bool value);
bool bit_value(const CircuitCtx& ctx, const Bit& b);
Bit bit_not(const Bit& b);
void lc_add_bit(LinComb& lc, const Bit& b, const Fr& coeff);
LinComb bit_lc(const Bit& b);

Bit bit_xor(CircuitCtx& ctx, const Bit& a, const Bit& b);
Bit bit_and(CircuitCtx& ctx, const Bit& a, const Bit& b);
Bit bit_or(CircuitCtx& ctx, const Bit& a, const Bit& b);
// sel ? t : f
Bit bit_select(CircuitCtx& ctx, const Bit& sel, const Bit& t, const Bit& f);
void assert_bit_true(CircuitCtx& ctx, const Bit& b);

// ===== Packing and decomposition =====

// little-endian weighted sum of bits starting at 2^start
void lc_add_bits(LinComb& lc, std::span<const Bit> bits_le, unsigned start = 0);

// big-endian bit-stream packing: bits[0] is the most significant
LinComb pack_be_bits(std::span<const Bit> bits_be);

// fresh boolean-constrained bits b_0..b_{n-1} with sum_j 2^j b_j == value_lc;
// witness mode throws if the value does not fit n bits
BitVec decompose_lc(CircuitCtx& ctx, const LinComb& value_lc, unsigned nbits);

// 1 iff value_lc == 0 (two constraints)
Bit lc_is_zero(CircuitCtx& ctx, const LinComb& value_lc);

// 1 iff a < b, both known to fit in width bits
Bit lc_less_than(CircuitCtx& ctx, const LinComb& a, const LinComb& b, unsigned width);

// a - b must fit in width bits, so a >= b; used for range conditions
void assert_lc_ge(CircuitCtx& ctx, const LinComb& a, const LinComb& b, unsigned width);

// strict 256-bit comparison of two big-endian bit streams
Bit stream_less_than(CircuitCtx& ctx, std::span<const Bit> a_be, std::span<const Bit> b_be);

// ===== Byte-stream helpers =====
//
// Hash inputs and outputs travel as big-endian bit streams: byte order of
// the octet string, most significant bit of each byte first.

BitVec constant_stream(const std::uint8_t* bytes, std::size_t n);
BitVec constant_stream(const crypto::HashDigest& d);
// fresh boolean witness bits carrying the given bytes
BitVec alloc_stream(CircuitCtx& ctx, const std::uint8_t* bytes, std::size_t n);
BitVec alloc_stream(CircuitCtx& ctx, const crypto::HashDigest& d);
// 256-bit stream of a field element's canonical big-endian bytes; the two
// leading bits are constants, the rest are a fresh 254-bit decomposition
BitVec field_be_stream(CircuitCtx& ctx, const LinComb& value_lc);

// witness-mode bytes of a stream (for cross-checks)
Bytes stream_value(const CircuitCtx& ctx, std::span<const Bit> stream);

// ===== SHA-256 =====

struct Word {
    std::array<Bit, 32> bits;  // bits[j] carries weight 2^j
};

std::array<Word, 8> sha_initial_state();
std::array<Word, 8> sha_compress(CircuitCtx& ctx, const std::array<Word, 8>& state,
                                 const std::array<Word, 16>& block);

// full hash of a fixed-length bit stream (whole bytes), returns the 256-bit
// digest stream
BitVec sha256_stream(CircuitCtx& ctx, const BitVec& message);

// ===== Embedded Edwards curve =====

struct EdVar {
    u32 x = 0, y = 0;
};

EdVar alloc_point(CircuitCtx& ctx, const ec::EdPoint& value);
void assert_on_curve(CircuitCtx& ctx, const EdVar& p);
EdVar edwards_add_var(CircuitCtx& ctx, const EdVar& p, const EdVar& q);
EdVar edwards_double_var(CircuitCtx& ctx, const EdVar& p);
EdVar edwards_add_const(CircuitCtx& ctx, const EdVar& p, const ec::EdPoint& c);
EdVar edwards_select(CircuitCtx& ctx, const Bit& sel, const EdVar& t, const EdVar& f);
void assert_points_equal(CircuitCtx& ctx, const EdVar& p, const EdVar& q);

// scalar given as little-endian bits
EdVar edwards_mul_fixed(CircuitCtx& ctx, std::span<const Bit> scalar_le, const ec::EdPoint& base);
EdVar edwards_mul_var(CircuitCtx& ctx, std::span<const Bit> scalar_le, const EdVar& base);

// ===== Signature verification =====

struct SigVars {
    EdVar r;        // commitment point, proven on-curve
    BitVec r_x;     // 256-bit stream of its x coordinate
    BitVec s_bits;  // response scalar, 251 little-endian bits
};

SigVars alloc_signature(CircuitCtx& ctx, const crypto::Signature& value);

// challenge = SHA-256(R.x bytes || pk.x bytes || digest) reduced modulo the
// subgroup order, then S*B == R + challenge*pk
void eddsa_verify_gadget(CircuitCtx& ctx, const SigVars& sig, const BitVec& pk_x_stream,
                         const EdVar& pk, const BitVec& digest_stream);
// same check against a compile-time verification key
void eddsa_verify_const_pk(CircuitCtx& ctx, const SigVars& sig, const ec::EdPoint& pk,
                           const BitVec& digest_stream);

// ===== Merkle path =====

// recomputes the root from a leaf stream and a path witness; path_value
// supplies sibling digests and directions (dummies while compiling)
BitVec merkle_root_gadget(CircuitCtx& ctx, const BitVec& leaf_stream,
                          const crypto::MerklePath& path_value, unsigned depth);

}  // namespace circuit
}  // namespace zkperm
