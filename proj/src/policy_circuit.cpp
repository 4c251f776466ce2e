#include "zkperm/policy_circuit.hpp"

#include <algorithm>
#include <stdexcept>

namespace zkperm {
namespace circuit {

// ===== Spec diagnostics =====

std::vector<std::string> claim_keys(const CircuitSpec& spec) {
    std::vector<std::string> keys;
    for (const auto& cond : spec.conditions) {
        if (std::find(keys.begin(), keys.end(), cond.key) == keys.end()) keys.push_back(cond.key);
    }
    return keys;
}

std::vector<std::size_t> condition_slots(const CircuitSpec& spec) {
    std::vector<std::string> keys = claim_keys(spec);
    std::vector<std::size_t> slots;
    slots.reserve(spec.conditions.size());
    for (const auto& cond : spec.conditions)
        slots.push_back(
            (std::size_t)(std::find(keys.begin(), keys.end(), cond.key) - keys.begin()));
    return slots;
}

bool spec_uses_timestamp(const CircuitSpec& spec) {
    return std::any_of(spec.conditions.begin(), spec.conditions.end(),
                       [](const policy::Condition& c) { return c.time_relative; });
}

namespace {

std::size_t membership_count(const CircuitSpec& spec) {
    return (std::size_t)std::count_if(
        spec.conditions.begin(), spec.conditions.end(),
        [](const policy::Condition& c) { return policy::op_is_membership(c.op); });
}

}  // namespace

unsigned public_input_count(const CircuitSpec& spec) {
    return 1 + 2 * (unsigned)claim_keys(spec).size() + 2 * (unsigned)membership_count(spec) +
           (spec_uses_timestamp(spec) ? 1 : 0);
}

crypto::HashDigest circuit_digest(const CircuitSpec& spec) {
    enc::Json conds = enc::Json::array();
    for (const auto& c : spec.conditions) conds.push_back(c.to_json());
    std::string issuer_hex;
    if (spec.scheme == policy::Scheme::Baseline) {
        std::uint8_t comp[32];
        ec::edwards_compress(spec.issuer_public_key, comp);
        issuer_hex = to_hex(comp, 32);
    }
    return enc::canonical_digest(enc::Json{{"conditions", conds},
                                           {"issuerKey", issuer_hex},
                                           {"merkleDepth", spec.merkle_depth},
                                           {"scheme", policy::scheme_name(spec.scheme)},
                                           {"version", 1}});
}

// ===== Shared construction =====

namespace {

Fr fr_pow2_64() {
    static const Fr v = Fr::from_u64(1ull << 32) * Fr::from_u64(1ull << 32);
    return v;
}

Fr digest_half(const crypto::HashDigest& d, unsigned half) {
    std::uint64_t hi = 0, lo = 0;
    for (int j = 0; j < 8; ++j) hi = (hi << 8) | d[16 * half + j];
    for (int j = 0; j < 8; ++j) lo = (lo << 8) | d[16 * half + 8 + j];
    return Fr::from_u64(hi) * fr_pow2_64() + Fr::from_u64(lo);
}

Fr fr_from_i64(std::int64_t v) {
    return v >= 0 ? Fr::from_u64((std::uint64_t)v) : -Fr::from_u64((std::uint64_t)(-v));
}

// comparison target in offset-binary space
Fr offset_target(std::int64_t v) {
    return Fr::from_u64((std::uint64_t)v + enc::kOffsetBias);
}

WitnessInputs dummy_inputs(const CircuitSpec& spec) {
    WitnessInputs in;
    std::size_t slots = claim_keys(spec).size();
    in.claims.resize(slots);
    in.claim_hashes.resize(slots);
    std::size_t members = membership_count(spec);
    in.memberships.resize(members);
    in.roots.resize(members);
    for (auto& m : in.memberships)
        m.path.siblings.assign(spec.merkle_depth, {crypto::HashDigest{}, false});
    return in;
}

void bind_digest_halves(CircuitCtx& ctx, const BitVec& stream, u32 hi_var, u32 lo_var) {
    std::span<const Bit> view(stream);
    ctx.constrain(lc_sub(pack_be_bits(view.subspan(0, 128)), lc_var(hi_var)), lc_one(), {});
    ctx.constrain(lc_sub(pack_be_bits(view.subspan(128, 128)), lc_var(lo_var)), lc_one(), {});
}

void build(CircuitCtx& ctx, const CircuitSpec& spec, const WitnessInputs& in) {
    std::vector<std::string> keys = claim_keys(spec);
    std::vector<std::size_t> slots = condition_slots(spec);
    bool uses_ts = spec_uses_timestamp(spec);

    // public inputs, in statement order
    u32 nonce_var = ctx.alloc(in.nonce);
    std::vector<std::array<u32, 2>> claim_h;
    for (std::size_t i = 0; i < keys.size(); ++i)
        claim_h.push_back({ctx.alloc(digest_half(in.claim_hashes[i], 0)),
                           ctx.alloc(digest_half(in.claim_hashes[i], 1))});
    std::vector<std::array<u32, 2>> root_vars;
    for (std::size_t j = 0; j < membership_count(spec); ++j)
        root_vars.push_back(
            {ctx.alloc(digest_half(in.roots[j], 0)), ctx.alloc(digest_half(in.roots[j], 1))});
    u32 ts_var = 0;
    if (uses_ts) {
        if (!ctx.compiling() && in.timestamp < 0)
            throw std::invalid_argument("negative timestamp");
        ts_var = ctx.alloc(Fr::from_u64((std::uint64_t)in.timestamp));
    }

    // subject key and key binding over the nonce bytes
    EdVar pk = alloc_point(ctx, in.subject_public_key);
    assert_on_curve(ctx, pk);
    BitVec pk_x_stream = field_be_stream(ctx, lc_var(pk.x));
    BitVec pk_y_le = decompose_lc(ctx, lc_var(pk.y), 254);
    BitVec nonce_stream = field_be_stream(ctx, lc_var(nonce_var));
    SigVars key_sig = alloc_signature(ctx, in.key_signature);
    eddsa_verify_gadget(ctx, key_sig, pk_x_stream, pk, nonce_stream);

    // compressed subject key: big-endian y carrying the parity of x on top
    BitVec pk_comp(256, Bit::constant(false));
    pk_comp[0] = pk_x_stream[255];
    for (unsigned i = 2; i < 256; ++i) pk_comp[i] = pk_y_le[255 - i];

    // claim slots: recompute each claim hash and bind it to the statement
    std::vector<BitVec> value_streams;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        BitVec value_stream = alloc_stream(ctx, in.claims[i].value_repr);
        crypto::HashDigest key_digest = crypto::sha256(bytes_of(keys[i]));
        BitVec msg = pk_comp;
        BitVec key_stream = constant_stream(key_digest);
        msg.insert(msg.end(), key_stream.begin(), key_stream.end());
        msg.insert(msg.end(), value_stream.begin(), value_stream.end());
        BitVec h = sha256_stream(ctx, msg);
        bind_digest_halves(ctx, h, claim_h[i][0], claim_h[i][1]);
        if (spec.scheme == policy::Scheme::Baseline) {
            SigVars issuer_sig = alloc_signature(ctx, in.claims[i].issuer_signature);
            eddsa_verify_const_pk(ctx, issuer_sig, spec.issuer_public_key, h);
        }
        value_streams.push_back(std::move(value_stream));
    }

    // conditions
    std::size_t m = 0;
    for (std::size_t ci = 0; ci < spec.conditions.size(); ++ci) {
        const policy::Condition& cond = spec.conditions[ci];
        const BitVec& value = value_streams[slots[ci]];
        std::span<const Bit> view(value);
        switch (cond.op) {
            case policy::Op::EQ: {
                crypto::HashDigest target = enc::value_repr(cond.value);
                ctx.constrain(
                    lc_sub(pack_be_bits(view.subspan(0, 128)), lc_const(digest_half(target, 0))),
                    lc_one(), {});
                ctx.constrain(
                    lc_sub(pack_be_bits(view.subspan(128, 128)), lc_const(digest_half(target, 1))),
                    lc_one(), {});
                break;
            }
            case policy::Op::NEQ: {
                crypto::HashDigest target = enc::value_repr(cond.value);
                Bit hi_eq = lc_is_zero(ctx, lc_sub(pack_be_bits(view.subspan(0, 128)),
                                                   lc_const(digest_half(target, 0))));
                Bit lo_eq = lc_is_zero(ctx, lc_sub(pack_be_bits(view.subspan(128, 128)),
                                                   lc_const(digest_half(target, 1))));
                ctx.constrain(bit_lc(hi_eq), bit_lc(lo_eq), {});
                break;
            }
            case policy::Op::GT:
            case policy::Op::LT:
            case policy::Op::GEQ:
            case policy::Op::LEQ: {
                // numeric representations occupy the low 64 bits only
                LinComb top;
                for (unsigned i = 0; i < 192; ++i) lc_add_bit(top, value[i], Fr::one());
                ctx.constrain(top, lc_one(), {});
                LinComb u = pack_be_bits(view.subspan(192, 64));
                LinComb target = cond.time_relative
                                     ? LinComb{{ts_var, Fr::one()},
                                               {0u, Fr::from_u64(enc::kOffsetBias) -
                                                        fr_from_i64(cond.value.num)}}
                                     : lc_const(offset_target(cond.value.num));
                switch (cond.op) {
                    case policy::Op::GT:
                        assert_lc_ge(ctx, u, lc_add(target, lc_one()), 64);
                        break;
                    case policy::Op::GEQ:
                        assert_lc_ge(ctx, u, target, 64);
                        break;
                    case policy::Op::LT:
                        assert_lc_ge(ctx, lc_sub(target, lc_one()), u, 64);
                        break;
                    default:
                        assert_lc_ge(ctx, target, u, 64);
                        break;
                }
                break;
            }
            case policy::Op::IN: {
                BitVec root =
                    merkle_root_gadget(ctx, value, in.memberships[m].path, spec.merkle_depth);
                bind_digest_halves(ctx, root, root_vars[m][0], root_vars[m][1]);
                ++m;
                break;
            }
            case policy::Op::NOTIN: {
                const MembershipWitness& mw = in.memberships[m];
                BitVec lower = alloc_stream(ctx, mw.lower);
                BitVec upper = alloc_stream(ctx, mw.upper);
                BitVec pair = lower;
                pair.insert(pair.end(), upper.begin(), upper.end());
                BitVec leaf = sha256_stream(ctx, pair);
                BitVec root = merkle_root_gadget(ctx, leaf, mw.path, spec.merkle_depth);
                bind_digest_halves(ctx, root, root_vars[m][0], root_vars[m][1]);
                // strictly inside the gap, or outside the span of a wrap pair
                Bit lt1 = stream_less_than(ctx, lower, value);
                Bit lt2 = stream_less_than(ctx, value, upper);
                Bit wrap = bit_not(stream_less_than(ctx, lower, upper));
                Bit inside = bit_and(ctx, lt1, lt2);
                Bit outside = bit_and(ctx, wrap, bit_or(ctx, lt1, lt2));
                assert_bit_true(ctx, bit_or(ctx, inside, outside));
                ++m;
                break;
            }
        }
    }
}

void validate_inputs(const CircuitSpec& spec, const WitnessInputs& in) {
    std::size_t slots = claim_keys(spec).size();
    std::size_t members = membership_count(spec);
    if (in.claims.size() != slots) throw std::invalid_argument("claim witness count mismatch");
    if (in.claim_hashes.size() != slots) throw std::invalid_argument("claim hash count mismatch");
    if (in.memberships.size() != members)
        throw std::invalid_argument("membership witness count mismatch");
    if (in.roots.size() != members) throw std::invalid_argument("membership root count mismatch");
    for (const auto& mw : in.memberships) {
        if (mw.path.siblings.size() != spec.merkle_depth)
            throw std::invalid_argument("membership path depth mismatch");
    }
}

}  // namespace

r1cs::ConstraintSystem compile_policy_circuit(const CircuitSpec& spec) {
    if (spec.conditions.empty()) throw std::invalid_argument("circuit needs conditions");
    if (spec.merkle_depth == 0 || spec.merkle_depth > 30)
        throw std::invalid_argument("tree depth out of range");
    for (const auto& cond : spec.conditions)
        if (policy::op_is_membership(cond.op) && cond.set_ref.empty())
            throw std::invalid_argument("membership condition needs a set reference");
    r1cs::ConstraintSystem cs;
    cs.metadata.scheme = (r1cs::u32)spec.scheme;
    cs.metadata.condition_count = (r1cs::u32)spec.conditions.size();
    cs.metadata.merkle_depth = spec.merkle_depth;
    r1cs::CircuitCtx ctx(r1cs::CircuitCtx::Mode::Compile, cs);
    WitnessInputs dummy = dummy_inputs(spec);
    build(ctx, spec, dummy);
    cs.set_public_count(public_input_count(spec));
    return cs;
}

std::vector<Fr> assemble_public_input(const CircuitSpec& spec, const Fr& nonce,
                                      const std::vector<crypto::HashDigest>& claim_hashes,
                                      const std::vector<crypto::HashDigest>& roots,
                                      std::int64_t timestamp) {
    if (claim_hashes.size() != claim_keys(spec).size())
        throw std::invalid_argument("claim hash count mismatch");
    if (roots.size() != membership_count(spec))
        throw std::invalid_argument("membership root count mismatch");
    std::vector<Fr> x;
    x.push_back(nonce);
    for (const auto& h : claim_hashes) {
        x.push_back(digest_half(h, 0));
        x.push_back(digest_half(h, 1));
    }
    for (const auto& r : roots) {
        x.push_back(digest_half(r, 0));
        x.push_back(digest_half(r, 1));
    }
    if (spec_uses_timestamp(spec)) {
        if (timestamp < 0) throw std::invalid_argument("negative timestamp");
        x.push_back(Fr::from_u64((std::uint64_t)timestamp));
    }
    return x;
}

std::vector<Fr> generate_witness(const CircuitSpec& spec, const r1cs::ConstraintSystem& cs,
                                 const WitnessInputs& inputs) {
    validate_inputs(spec, inputs);
    r1cs::ConstraintSystem scratch;
    r1cs::CircuitCtx ctx(r1cs::CircuitCtx::Mode::Witness, scratch);
    build(ctx, spec, inputs);
    if (ctx.values().size() != cs.num_variables())
        throw std::runtime_error("witness shape does not match the compiled circuit");
    return std::move(ctx.values());
}

}  // namespace circuit
}  // namespace zkperm
