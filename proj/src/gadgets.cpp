#include "zkperm/gadgets.hpp"

#include <stdexcept>

namespace zkperm {
namespace circuit {

const Fr& pow2(unsigned k) {
    static const std::array<Fr, 256> table = [] {
        std::array<Fr, 256> t;
        t[0] = Fr::one();
        Fr two = Fr::from_u64(2);
        for (unsigned i = 1; i < 256; ++i) t[i] = t[i - 1] * two;
        return t;
    }();
    if (k >= 256) throw std::invalid_argument("power-of-two exponent out of range");
    return table[k];
}

namespace {

const LinComb kEmptyLc{};

}  // namespace

// ===== Bits =====

Bit alloc_bit(CircuitCtx& ctx, bool value) {
    u32 v = ctx.alloc(value ? Fr::one() : Fr::zero());
    LinComb lv = lc_var(v);
    ctx.constrain(lv, lc_sub(lv, lc_one()), kEmptyLc);
    return Bit::wire(v);
}

bool bit_value(const CircuitCtx& ctx, const Bit& b) {
    if (b.is_const) return b.const_value;
    bool on = !ctx.value_of(b.var).is_zero();
    return b.negated ? !on : on;
}

Bit bit_not(const Bit& b) {
    Bit out = b;
    if (out.is_const) {
        out.const_value = !out.const_value;
    } else {
        out.negated = !out.negated;
    }
    return out;
}

void lc_add_bit(LinComb& lc, const Bit& b, const Fr& coeff) {
    if (b.is_const) {
        if (b.const_value) lc.emplace_back(0u, coeff);
        return;
    }
    if (b.negated) {
        lc.emplace_back(0u, coeff);
        lc.emplace_back(b.var, -coeff);
    } else {
        lc.emplace_back(b.var, coeff);
    }
}

LinComb bit_lc(const Bit& b) {
    LinComb lc;
    lc_add_bit(lc, b, Fr::one());
    return lc;
}

Bit bit_xor(CircuitCtx& ctx, const Bit& a, const Bit& b) {
    if (a.is_const) return a.const_value ? bit_not(b) : b;
    if (b.is_const) return b.const_value ? bit_not(a) : a;
    bool value = bit_value(ctx, a) != bit_value(ctx, b);
    u32 out = ctx.alloc(value ? Fr::one() : Fr::zero());
    LinComb la = bit_lc(a), lb = bit_lc(b);
    LinComb two_a;
    lc_add_bit(two_a, a, Fr::from_u64(2));
    ctx.constrain(two_a, lb, lc_sub(lc_add(la, lb), lc_var(out)));
    return Bit::wire(out);
}

Bit bit_and(CircuitCtx& ctx, const Bit& a, const Bit& b) {
    if (a.is_const) return a.const_value ? b : Bit::constant(false);
    if (b.is_const) return b.const_value ? a : Bit::constant(false);
    bool value = bit_value(ctx, a) && bit_value(ctx, b);
    u32 out = ctx.alloc(value ? Fr::one() : Fr::zero());
    ctx.constrain(bit_lc(a), bit_lc(b), lc_var(out));
    return Bit::wire(out);
}

Bit bit_or(CircuitCtx& ctx, const Bit& a, const Bit& b) {
    if (a.is_const) return a.const_value ? Bit::constant(true) : b;
    if (b.is_const) return b.const_value ? Bit::constant(true) : a;
    bool value = bit_value(ctx, a) || bit_value(ctx, b);
    u32 out = ctx.alloc(value ? Fr::one() : Fr::zero());
    LinComb la = bit_lc(a), lb = bit_lc(b);
    ctx.constrain(la, lb, lc_sub(lc_add(la, lb), lc_var(out)));
    return Bit::wire(out);
}

Bit bit_select(CircuitCtx& ctx, const Bit& sel, const Bit& t, const Bit& f) {
    if (sel.is_const) return sel.const_value ? t : f;
    if (t.is_const && f.is_const) {
        if (t.const_value == f.const_value) return t;
        return t.const_value ? sel : bit_not(sel);
    }
    bool value = bit_value(ctx, sel) ? bit_value(ctx, t) : bit_value(ctx, f);
    u32 out = ctx.alloc(value ? Fr::one() : Fr::zero());
    LinComb lf = bit_lc(f);
    ctx.constrain(bit_lc(sel), lc_sub(bit_lc(t), lf), lc_sub(lc_var(out), lf));
    return Bit::wire(out);
}

void assert_bit_true(CircuitCtx& ctx, const Bit& b) {
    if (b.is_const && b.const_value) return;
    ctx.constrain(bit_lc(b), lc_one(), lc_one());
}

// ===== Packing and decomposition =====

void lc_add_bits(LinComb& lc, std::span<const Bit> bits_le, unsigned start) {
    for (std::size_t j = 0; j < bits_le.size(); ++j)
        lc_add_bit(lc, bits_le[j], pow2(start + (unsigned)j));
}

LinComb pack_be_bits(std::span<const Bit> bits_be) {
    LinComb lc;
    unsigned n = (unsigned)bits_be.size();
    for (unsigned i = 0; i < n; ++i) lc_add_bit(lc, bits_be[i], pow2(n - 1 - i));
    return lc;
}

BitVec decompose_lc(CircuitCtx& ctx, const LinComb& value_lc, unsigned nbits) {
    if (nbits == 0 || nbits > 255) throw std::invalid_argument("bad decomposition width");
    ff::Limbs v{0, 0, 0, 0};
    if (!ctx.compiling()) v = ctx.eval(value_lc).to_limbs();
    // Witness values beyond nbits are silently truncated: the packing
    // constraint below then fails, so a dishonest input yields an
    // unsatisfying assignment instead of aborting witness generation.
    BitVec bits;
    bits.reserve(nbits);
    LinComb packed;
    for (unsigned j = 0; j < nbits; ++j) {
        bool bv = (v[j / 64] >> (j % 64)) & 1;
        Bit b = alloc_bit(ctx, bv);
        bits.push_back(b);
        lc_add_bit(packed, b, pow2(j));
    }
    ctx.constrain(lc_sub(packed, value_lc), lc_one(), kEmptyLc);
    return bits;
}

Bit lc_is_zero(CircuitCtx& ctx, const LinComb& value_lc) {
    Fr v = ctx.eval(value_lc);
    bool zero = v.is_zero();
    u32 z = ctx.alloc(zero ? Fr::one() : Fr::zero());
    u32 inv = ctx.alloc(zero ? Fr::zero() : v.inverse());
    ctx.constrain(value_lc, lc_var(inv), lc_sub(lc_one(), lc_var(z)));
    ctx.constrain(value_lc, lc_var(z), kEmptyLc);
    return Bit::wire(z);
}

Bit lc_less_than(CircuitCtx& ctx, const LinComb& a, const LinComb& b, unsigned width) {
    // s = (2^width - 1) - a + b; its top bit is the comparison outcome
    LinComb s = lc_const(pow2(width) - Fr::one());
    s = lc_add(s, lc_sub(b, a));
    BitVec bits = decompose_lc(ctx, s, width + 1);
    return bits[width];
}

void assert_lc_ge(CircuitCtx& ctx, const LinComb& a, const LinComb& b, unsigned width) {
    decompose_lc(ctx, lc_sub(a, b), width);
}

Bit stream_less_than(CircuitCtx& ctx, std::span<const Bit> a_be, std::span<const Bit> b_be) {
    if (a_be.size() != 256 || b_be.size() != 256)
        throw std::invalid_argument("stream comparison expects 256-bit inputs");
    LinComb a_hi = pack_be_bits(a_be.subspan(0, 128));
    LinComb a_lo = pack_be_bits(a_be.subspan(128, 128));
    LinComb b_hi = pack_be_bits(b_be.subspan(0, 128));
    LinComb b_lo = pack_be_bits(b_be.subspan(128, 128));
    Bit lt_hi = lc_less_than(ctx, a_hi, b_hi, 128);
    Bit eq_hi = lc_is_zero(ctx, lc_sub(a_hi, b_hi));
    Bit lt_lo = lc_less_than(ctx, a_lo, b_lo, 128);
    bool value = bit_value(ctx, lt_hi) || (bit_value(ctx, eq_hi) && bit_value(ctx, lt_lo));
    u32 out = ctx.alloc(value ? Fr::one() : Fr::zero());
    ctx.constrain(bit_lc(eq_hi), bit_lc(lt_lo), lc_sub(lc_var(out), bit_lc(lt_hi)));
    return Bit::wire(out);
}

// ===== Byte streams =====

BitVec constant_stream(const std::uint8_t* bytes, std::size_t n) {
    BitVec out;
    out.reserve(8 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 7; j >= 0; --j) out.push_back(Bit::constant((bytes[i] >> j) & 1));
    return out;
}

BitVec constant_stream(const crypto::HashDigest& d) { return constant_stream(d.data(), d.size()); }

BitVec alloc_stream(CircuitCtx& ctx, const std::uint8_t* bytes, std::size_t n) {
    BitVec out;
    out.reserve(8 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 7; j >= 0; --j) out.push_back(alloc_bit(ctx, (bytes[i] >> j) & 1));
    return out;
}

BitVec alloc_stream(CircuitCtx& ctx, const crypto::HashDigest& d) {
    return alloc_stream(ctx, d.data(), d.size());
}

BitVec field_be_stream(CircuitCtx& ctx, const LinComb& value_lc) {
    BitVec le = decompose_lc(ctx, value_lc, 254);
    BitVec out(256, Bit::constant(false));
    for (unsigned i = 2; i < 256; ++i) out[i] = le[255 - i];
    return out;
}

Bytes stream_value(const CircuitCtx& ctx, std::span<const Bit> stream) {
    if (stream.size() % 8 != 0) throw std::invalid_argument("stream is not whole bytes");
    Bytes out(stream.size() / 8, 0);
    for (std::size_t i = 0; i < stream.size(); ++i)
        if (bit_value(ctx, stream[i])) out[i / 8] |= (std::uint8_t)(1u << (7 - i % 8));
    return out;
}

// ===== SHA-256 =====

namespace {

Word word_constant(std::uint32_t v) {
    Word w;
    for (unsigned j = 0; j < 32; ++j) w.bits[j] = Bit::constant((v >> j) & 1);
    return w;
}

Word word_rotr(const Word& w, unsigned n) {
    Word out;
    for (unsigned j = 0; j < 32; ++j) out.bits[j] = w.bits[(j + n) % 32];
    return out;
}

Word word_shr(const Word& w, unsigned n) {
    Word out;
    for (unsigned j = 0; j < 32; ++j)
        out.bits[j] = j + n < 32 ? w.bits[j + n] : Bit::constant(false);
    return out;
}

Word word_xor3(CircuitCtx& ctx, const Word& a, const Word& b, const Word& c) {
    Word out;
    for (unsigned j = 0; j < 32; ++j)
        out.bits[j] = bit_xor(ctx, bit_xor(ctx, a.bits[j], b.bits[j]), c.bits[j]);
    return out;
}

LinComb word_lc(const Word& w) {
    LinComb lc;
    lc_add_bits(lc, w.bits, 0);
    return lc;
}

// low 32 bits of a sum known to fit in 32 + extra bits
Word word_from_sum(CircuitCtx& ctx, const LinComb& sum, unsigned extra) {
    BitVec bits = decompose_lc(ctx, sum, 32 + extra);
    Word out;
    for (unsigned j = 0; j < 32; ++j) out.bits[j] = bits[j];
    return out;
}

// e ? f : g per bit
Word word_ch(CircuitCtx& ctx, const Word& e, const Word& f, const Word& g) {
    Word out;
    for (unsigned j = 0; j < 32; ++j) out.bits[j] = bit_select(ctx, e.bits[j], f.bits[j], g.bits[j]);
    return out;
}

Bit bit_maj(CircuitCtx& ctx, const Bit& a, const Bit& b, const Bit& c) {
    if (a.is_const) return a.const_value ? bit_or(ctx, b, c) : bit_and(ctx, b, c);
    if (b.is_const) return b.const_value ? bit_or(ctx, a, c) : bit_and(ctx, a, c);
    if (c.is_const) return c.const_value ? bit_or(ctx, a, b) : bit_and(ctx, a, b);
    // t = b & c, out = a(b + c - 2t) + t
    Bit t = bit_and(ctx, b, c);
    bool value = (bit_value(ctx, a) && (bit_value(ctx, b) || bit_value(ctx, c))) ||
                 (bit_value(ctx, b) && bit_value(ctx, c));
    u32 out = ctx.alloc(value ? Fr::one() : Fr::zero());
    LinComb mid = bit_lc(b);
    lc_add_bit(mid, c, Fr::one());
    lc_add_bit(mid, t, -Fr::from_u64(2));
    ctx.constrain(bit_lc(a), mid, lc_sub(lc_var(out), bit_lc(t)));
    return Bit::wire(out);
}

Word word_maj(CircuitCtx& ctx, const Word& a, const Word& b, const Word& c) {
    Word out;
    for (unsigned j = 0; j < 32; ++j) out.bits[j] = bit_maj(ctx, a.bits[j], b.bits[j], c.bits[j]);
    return out;
}

}  // namespace

std::array<Word, 8> sha_initial_state() {
    std::array<Word, 8> st;
    for (unsigned i = 0; i < 8; ++i) st[i] = word_constant(crypto::Sha256::kInit[i]);
    return st;
}

std::array<Word, 8> sha_compress(CircuitCtx& ctx, const std::array<Word, 8>& state,
                                 const std::array<Word, 16>& block) {
    std::array<Word, 64> w;
    for (unsigned i = 0; i < 16; ++i) w[i] = block[i];
    for (unsigned i = 16; i < 64; ++i) {
        Word s0 = word_xor3(ctx, word_rotr(w[i - 15], 7), word_rotr(w[i - 15], 18),
                            word_shr(w[i - 15], 3));
        Word s1 = word_xor3(ctx, word_rotr(w[i - 2], 17), word_rotr(w[i - 2], 19),
                            word_shr(w[i - 2], 10));
        LinComb sum = word_lc(w[i - 16]);
        sum = lc_add(sum, word_lc(s0));
        sum = lc_add(sum, word_lc(w[i - 7]));
        sum = lc_add(sum, word_lc(s1));
        w[i] = word_from_sum(ctx, sum, 2);
    }

    Word a = state[0], b = state[1], c = state[2], d = state[3];
    Word e = state[4], f = state[5], g = state[6], h = state[7];
    for (unsigned i = 0; i < 64; ++i) {
        Word s1 = word_xor3(ctx, word_rotr(e, 6), word_rotr(e, 11), word_rotr(e, 25));
        Word ch = word_ch(ctx, e, f, g);
        LinComb t1 = word_lc(h);
        t1 = lc_add(t1, word_lc(s1));
        t1 = lc_add(t1, word_lc(ch));
        t1 = lc_add(t1, lc_const(Fr::from_u64(crypto::Sha256::kRound[i])));
        t1 = lc_add(t1, word_lc(w[i]));
        Word s0 = word_xor3(ctx, word_rotr(a, 2), word_rotr(a, 13), word_rotr(a, 22));
        Word mj = word_maj(ctx, a, b, c);
        LinComb t2 = lc_add(word_lc(s0), word_lc(mj));

        Word new_e = word_from_sum(ctx, lc_add(word_lc(d), t1), 3);
        Word new_a = word_from_sum(ctx, lc_add(t1, t2), 3);
        h = g;
        g = f;
        f = e;
        e = new_e;
        d = c;
        c = b;
        b = a;
        a = new_a;
    }

    std::array<Word, 8> next = {a, b, c, d, e, f, g, h};
    std::array<Word, 8> out;
    for (unsigned i = 0; i < 8; ++i)
        out[i] = word_from_sum(ctx, lc_add(word_lc(state[i]), word_lc(next[i])), 1);
    return out;
}

BitVec sha256_stream(CircuitCtx& ctx, const BitVec& message) {
    if (message.size() % 8 != 0) throw std::invalid_argument("message is not whole bytes");
    std::uint64_t length = message.size();
    BitVec padded = message;
    padded.push_back(Bit::constant(true));
    while (padded.size() % 512 != 448) padded.push_back(Bit::constant(false));
    for (int j = 63; j >= 0; --j) padded.push_back(Bit::constant((length >> j) & 1));

    std::array<Word, 8> state = sha_initial_state();
    for (std::size_t blk = 0; blk < padded.size() / 512; ++blk) {
        std::array<Word, 16> block;
        for (unsigned k = 0; k < 16; ++k)
            for (unsigned i = 0; i < 32; ++i)
                block[k].bits[31 - i] = padded[512 * blk + 32 * k + i];
        state = sha_compress(ctx, state, block);
    }

    BitVec digest;
    digest.reserve(256);
    for (unsigned k = 0; k < 8; ++k)
        for (int j = 31; j >= 0; --j) digest.push_back(state[k].bits[j]);
    return digest;
}

// ===== Embedded Edwards curve =====

namespace {

ec::EdPoint point_value(const CircuitCtx& ctx, const EdVar& p) {
    return ec::EdPoint{ctx.value_of(p.x), ctx.value_of(p.y)};
}

}  // namespace

EdVar alloc_point(CircuitCtx& ctx, const ec::EdPoint& value) {
    EdVar p;
    p.x = ctx.alloc(value.x);
    p.y = ctx.alloc(value.y);
    return p;
}

void assert_on_curve(CircuitCtx& ctx, const EdVar& p) {
    Fr xv = ctx.value_of(p.x), yv = ctx.value_of(p.y);
    u32 x2 = ctx.alloc(xv * xv);
    u32 y2 = ctx.alloc(yv * yv);
    u32 x2y2 = ctx.alloc(xv * xv * yv * yv);
    ctx.constrain(lc_var(p.x), lc_var(p.x), lc_var(x2));
    ctx.constrain(lc_var(p.y), lc_var(p.y), lc_var(y2));
    ctx.constrain(lc_var(x2), lc_var(y2), lc_var(x2y2));
    LinComb rel = {{x2, ec::edwards_a()}, {y2, Fr::one()}, {0u, -Fr::one()},
                   {x2y2, -ec::edwards_d()}};
    ctx.constrain(rel, lc_one(), kEmptyLc);
}

EdVar edwards_add_var(CircuitCtx& ctx, const EdVar& p, const EdVar& q) {
    ec::EdPoint pv = point_value(ctx, p), qv = point_value(ctx, q);
    ec::EdPoint sum = ec::edwards_add(pv, qv);
    u32 xy = ctx.alloc(pv.x * qv.y);
    u32 yx = ctx.alloc(pv.y * qv.x);
    u32 xx = ctx.alloc(pv.x * qv.x);
    u32 yy = ctx.alloc(pv.y * qv.y);
    u32 prod = ctx.alloc(pv.x * qv.x * pv.y * qv.y);
    EdVar out = alloc_point(ctx, sum);
    ctx.constrain(lc_var(p.x), lc_var(q.y), lc_var(xy));
    ctx.constrain(lc_var(p.y), lc_var(q.x), lc_var(yx));
    ctx.constrain(lc_var(p.x), lc_var(q.x), lc_var(xx));
    ctx.constrain(lc_var(p.y), lc_var(q.y), lc_var(yy));
    ctx.constrain(lc_var(xx), lc_var(yy), lc_var(prod));
    // x3 (1 + d xxyy) = xy + yx ; y3 (1 - d xxyy) = yy - a xx
    ctx.constrain(lc_var(out.x), {{0u, Fr::one()}, {prod, ec::edwards_d()}},
                  lc_add(lc_var(xy), lc_var(yx)));
    ctx.constrain(lc_var(out.y), {{0u, Fr::one()}, {prod, -ec::edwards_d()}},
                  {{yy, Fr::one()}, {xx, -ec::edwards_a()}});
    return out;
}

EdVar edwards_double_var(CircuitCtx& ctx, const EdVar& p) {
    ec::EdPoint pv = point_value(ctx, p);
    ec::EdPoint sum = ec::edwards_add(pv, pv);
    u32 xy = ctx.alloc(pv.x * pv.y);
    u32 xx = ctx.alloc(pv.x * pv.x);
    u32 yy = ctx.alloc(pv.y * pv.y);
    u32 prod = ctx.alloc(pv.x * pv.x * pv.y * pv.y);
    EdVar out = alloc_point(ctx, sum);
    ctx.constrain(lc_var(p.x), lc_var(p.y), lc_var(xy));
    ctx.constrain(lc_var(p.x), lc_var(p.x), lc_var(xx));
    ctx.constrain(lc_var(p.y), lc_var(p.y), lc_var(yy));
    ctx.constrain(lc_var(xx), lc_var(yy), lc_var(prod));
    ctx.constrain(lc_var(out.x), {{0u, Fr::one()}, {prod, ec::edwards_d()}},
                  {{xy, Fr::from_u64(2)}});
    ctx.constrain(lc_var(out.y), {{0u, Fr::one()}, {prod, -ec::edwards_d()}},
                  {{yy, Fr::one()}, {xx, -ec::edwards_a()}});
    return out;
}

EdVar edwards_add_const(CircuitCtx& ctx, const EdVar& p, const ec::EdPoint& c) {
    if (c == ec::EdPoint::identity()) return p;
    ec::EdPoint pv = point_value(ctx, p);
    ec::EdPoint sum = ec::edwards_add(pv, c);
    u32 xy = ctx.alloc(pv.x * pv.y);
    EdVar out = alloc_point(ctx, sum);
    Fr dxy = ec::edwards_d() * c.x * c.y;
    ctx.constrain(lc_var(p.x), lc_var(p.y), lc_var(xy));
    ctx.constrain(lc_var(out.x), {{0u, Fr::one()}, {xy, dxy}},
                  {{p.x, c.y}, {p.y, c.x}});
    ctx.constrain(lc_var(out.y), {{0u, Fr::one()}, {xy, -dxy}},
                  {{p.y, c.y}, {p.x, -(ec::edwards_a() * c.x)}});
    return out;
}

EdVar edwards_select(CircuitCtx& ctx, const Bit& sel, const EdVar& t, const EdVar& f) {
    if (sel.is_const) return sel.const_value ? t : f;
    ec::EdPoint val = bit_value(ctx, sel) ? point_value(ctx, t) : point_value(ctx, f);
    EdVar out = alloc_point(ctx, val);
    ctx.constrain(bit_lc(sel), lc_sub(lc_var(t.x), lc_var(f.x)),
                  lc_sub(lc_var(out.x), lc_var(f.x)));
    ctx.constrain(bit_lc(sel), lc_sub(lc_var(t.y), lc_var(f.y)),
                  lc_sub(lc_var(out.y), lc_var(f.y)));
    return out;
}

void assert_points_equal(CircuitCtx& ctx, const EdVar& p, const EdVar& q) {
    ctx.constrain(lc_sub(lc_var(p.x), lc_var(q.x)), lc_one(), kEmptyLc);
    ctx.constrain(lc_sub(lc_var(p.y), lc_var(q.y)), lc_one(), kEmptyLc);
}

namespace {

// accumulator pinned to the identity (0, 1)
EdVar identity_point(CircuitCtx& ctx) {
    EdVar p = alloc_point(ctx, ec::EdPoint::identity());
    ctx.constrain(lc_var(p.x), lc_one(), kEmptyLc);
    ctx.constrain(lc_sub(lc_var(p.y), lc_one()), lc_one(), kEmptyLc);
    return p;
}

}  // namespace

EdVar edwards_mul_fixed(CircuitCtx& ctx, std::span<const Bit> scalar_le, const ec::EdPoint& base) {
    EdVar acc = identity_point(ctx);
    for (std::size_t i = scalar_le.size(); i-- > 0;) {
        acc = edwards_double_var(ctx, acc);
        EdVar added = edwards_add_const(ctx, acc, base);
        acc = edwards_select(ctx, scalar_le[i], added, acc);
    }
    return acc;
}

EdVar edwards_mul_var(CircuitCtx& ctx, std::span<const Bit> scalar_le, const EdVar& base) {
    EdVar acc = identity_point(ctx);
    for (std::size_t i = scalar_le.size(); i-- > 0;) {
        acc = edwards_double_var(ctx, acc);
        EdVar added = edwards_add_var(ctx, acc, base);
        acc = edwards_select(ctx, scalar_le[i], added, acc);
    }
    return acc;
}

// ===== Signature verification =====

namespace {

constexpr unsigned kScalarBits = 251;  // the subgroup order has 251 bits

// 4-limb little-endian helpers for the witness-side challenge reduction
using Wide = std::array<std::uint64_t, 4>;

bool wide_less(const Wide& a, const Wide& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

Wide wide_sub(const Wide& a, const Wide& b) {
    Wide out{};
    unsigned borrow = 0;
    for (int i = 0; i < 4; ++i) {
        std::uint64_t t = b[i] + borrow;
        borrow = (a[i] < t || (borrow && t == 0)) ? 1 : 0;
        out[i] = a[i] - t;
    }
    return out;
}

}  // namespace

SigVars alloc_signature(CircuitCtx& ctx, const crypto::Signature& value) {
    SigVars sig;
    sig.r = alloc_point(ctx, value.commitment_point);
    assert_on_curve(ctx, sig.r);
    sig.r_x = field_be_stream(ctx, lc_var(sig.r.x));
    sig.s_bits.reserve(kScalarBits);
    for (unsigned j = 0; j < kScalarBits; ++j) {
        bool bv = (value.response_scalar[j / 64] >> (j % 64)) & 1;
        sig.s_bits.push_back(alloc_bit(ctx, bv));
    }
    return sig;
}

namespace {

// digest (a 256-bit big-endian stream) reduced modulo the subgroup order;
// returns the 251 little-endian remainder bits. The two-limb identity
//   q * l + e == digest
// is checked with an explicit 128-bit carry.
BitVec reduce_mod_order(CircuitCtx& ctx, const BitVec& digest_stream) {
    const ff::Limbs& l = ec::edwards_subgroup_order;

    std::uint64_t q_val = 0;
    Wide e_val{};
    if (!ctx.compiling()) {
        Bytes raw = stream_value(ctx, digest_stream);
        Wide d{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 8; ++j) d[3 - i] = (d[3 - i] << 8) | raw[8 * i + j];
        Wide rem = d;
        Wide order{l[0], l[1], l[2], l[3]};
        while (!wide_less(rem, order)) {
            rem = wide_sub(rem, order);
            ++q_val;
        }
        e_val = rem;
    }

    BitVec q_bits, e_bits;
    for (unsigned j = 0; j < 6; ++j) q_bits.push_back(alloc_bit(ctx, (q_val >> j) & 1));
    for (unsigned j = 0; j < kScalarBits; ++j)
        e_bits.push_back(alloc_bit(ctx, (e_val[j / 64] >> (j % 64)) & 1));

    // carry = (q * l_lo + e_lo - digest_lo) >> 128
    std::uint64_t carry_val = 0;
    if (!ctx.compiling()) {
        unsigned __int128 p0 = (unsigned __int128)q_val * l[0] + e_val[0];
        unsigned __int128 p1 = (unsigned __int128)q_val * l[1] + e_val[1] + (p0 >> 64);
        carry_val = (std::uint64_t)(p1 >> 64);
    }
    BitVec carry_bits;
    for (unsigned j = 0; j < 7; ++j) carry_bits.push_back(alloc_bit(ctx, (carry_val >> j) & 1));

    Fr l_lo = Fr::from_u64(l[1]) * pow2(64) + Fr::from_u64(l[0]);
    Fr l_hi = Fr::from_u64(l[3]) * pow2(64) + Fr::from_u64(l[2]);

    LinComb d_hi = pack_be_bits(std::span<const Bit>(digest_stream).subspan(0, 128));
    LinComb d_lo = pack_be_bits(std::span<const Bit>(digest_stream).subspan(128, 128));

    LinComb e_lo, e_hi, q_lc, c_lc;
    for (unsigned j = 0; j < 128; ++j) lc_add_bit(e_lo, e_bits[j], pow2(j));
    for (unsigned j = 128; j < kScalarBits; ++j) lc_add_bit(e_hi, e_bits[j], pow2(j - 128));
    lc_add_bits(q_lc, q_bits, 0);
    lc_add_bits(c_lc, carry_bits, 0);

    // q l_lo + e_lo - carry 2^128 - d_lo == 0
    LinComb eq_lo;
    for (unsigned j = 0; j < 6; ++j) lc_add_bit(eq_lo, q_bits[j], pow2(j) * l_lo);
    eq_lo = lc_add(eq_lo, e_lo);
    for (unsigned j = 0; j < 7; ++j) lc_add_bit(eq_lo, carry_bits[j], -(pow2(j) * pow2(128)));
    eq_lo = lc_sub(eq_lo, d_lo);
    ctx.constrain(eq_lo, lc_one(), kEmptyLc);

    // q l_hi + e_hi + carry - d_hi == 0
    LinComb eq_hi;
    for (unsigned j = 0; j < 6; ++j) lc_add_bit(eq_hi, q_bits[j], pow2(j) * l_hi);
    eq_hi = lc_add(eq_hi, e_hi);
    eq_hi = lc_add(eq_hi, c_lc);
    eq_hi = lc_sub(eq_hi, d_hi);
    ctx.constrain(eq_hi, lc_one(), kEmptyLc);

    return e_bits;
}

void eddsa_check(CircuitCtx& ctx, const SigVars& sig, const BitVec& challenge_bits,
                 const EdVar* pk_var, const ec::EdPoint* pk_const) {
    EdVar lhs = edwards_mul_fixed(ctx, sig.s_bits, ec::edwards_base());
    EdVar e_pk = pk_var ? edwards_mul_var(ctx, challenge_bits, *pk_var)
                        : edwards_mul_fixed(ctx, challenge_bits, *pk_const);
    EdVar rhs = edwards_add_var(ctx, sig.r, e_pk);
    assert_points_equal(ctx, lhs, rhs);
}

}  // namespace

void eddsa_verify_gadget(CircuitCtx& ctx, const SigVars& sig, const BitVec& pk_x_stream,
                         const EdVar& pk, const BitVec& digest_stream) {
    BitVec msg = sig.r_x;
    msg.insert(msg.end(), pk_x_stream.begin(), pk_x_stream.end());
    msg.insert(msg.end(), digest_stream.begin(), digest_stream.end());
    BitVec e_bits = reduce_mod_order(ctx, sha256_stream(ctx, msg));
    eddsa_check(ctx, sig, e_bits, &pk, nullptr);
}

void eddsa_verify_const_pk(CircuitCtx& ctx, const SigVars& sig, const ec::EdPoint& pk,
                           const BitVec& digest_stream) {
    std::uint8_t pk_x[32];
    ff::field_to_bytes(pk.x, pk_x);
    BitVec msg = sig.r_x;
    BitVec pk_stream = constant_stream(pk_x, 32);
    msg.insert(msg.end(), pk_stream.begin(), pk_stream.end());
    msg.insert(msg.end(), digest_stream.begin(), digest_stream.end());
    BitVec e_bits = reduce_mod_order(ctx, sha256_stream(ctx, msg));
    eddsa_check(ctx, sig, e_bits, nullptr, &pk);
}

// ===== Merkle path =====

BitVec merkle_root_gadget(CircuitCtx& ctx, const BitVec& leaf_stream,
                          const crypto::MerklePath& path_value, unsigned depth) {
    if (leaf_stream.size() != 256) throw std::invalid_argument("leaf stream must be 256 bits");
    if (path_value.siblings.size() != depth)
        throw std::invalid_argument("path length does not match tree depth");
    BitVec cur = leaf_stream;
    for (unsigned level = 0; level < depth; ++level) {
        const auto& [sib_digest, sib_is_right] = path_value.siblings[level];
        BitVec sib = alloc_stream(ctx, sib_digest);
        Bit on_left = alloc_bit(ctx, sib_is_right);
        BitVec node;
        node.reserve(512);
        for (unsigned i = 0; i < 256; ++i) node.push_back(bit_select(ctx, on_left, cur[i], sib[i]));
        for (unsigned i = 0; i < 256; ++i) node.push_back(bit_select(ctx, on_left, sib[i], cur[i]));
        cur = sha256_stream(ctx, node);
    }
    return cur;
}

}  // namespace circuit
}  // namespace zkperm
