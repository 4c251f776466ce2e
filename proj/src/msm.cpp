#include "zkperm/msm.hpp"

#include <stdexcept>

namespace zkperm {
namespace ec {

using ff::Limbs;

namespace {

unsigned scalar_bits(const std::vector<Limbs>& scalars) {
    unsigned bits = 1;
    for (const Limbs& s : scalars) {
        for (int limb = 3; limb >= 0; --limb) {
            if (s[limb] == 0) continue;
            unsigned b = (unsigned)limb * 64 + (64 - (unsigned)__builtin_clzll(s[limb]));
            if (b > bits) bits = b;
            break;
        }
    }
    return bits;
}

unsigned pick_window(std::size_t n) {
    if (n < 32) return 3;
    if (n < 256) return 6;
    if (n < 4096) return 9;
    if (n < 65536) return 11;
    if (n < 1048576) return 13;
    return 15;
}

inline unsigned digit_at(const Limbs& s, unsigned bit, unsigned width) {
    unsigned limb = bit / 64, off = bit % 64;
    std::uint64_t d = s[limb] >> off;
    if (off + width > 64 && limb + 1 < 4) d |= s[limb + 1] << (64 - off);
    return (unsigned)(d & ((1u << width) - 1));
}

template <typename AffineP, typename JacP>
JacP msm_impl(const std::vector<AffineP>& bases, const std::vector<Limbs>& scalars) {
    if (bases.size() != scalars.size())
        throw std::invalid_argument("msm: base and scalar counts differ");
    if (bases.empty()) return JacP::zero();

    unsigned bits = scalar_bits(scalars);
    unsigned c = pick_window(bases.size());
    if (c > bits) c = bits;
    unsigned num_windows = (bits + c - 1) / c;
    std::size_t num_buckets = ((std::size_t)1 << c) - 1;

    std::vector<JacP> buckets(num_buckets);
    JacP result = JacP::zero();

    for (unsigned w = num_windows; w-- > 0;) {
        if (w + 1 != num_windows) {
            for (unsigned i = 0; i < c; ++i) result = result.dbl();
        }
        for (auto& b : buckets) b = JacP::zero();
        bool any = false;
        for (std::size_t i = 0; i < bases.size(); ++i) {
            if (bases[i].infinity) continue;
            unsigned d = digit_at(scalars[i], w * c, c);
            if (d == 0) continue;
            buckets[d - 1] = buckets[d - 1].madd(bases[i]);
            any = true;
        }
        if (!any) continue;
        // running-sum trick: sum_d d*bucket[d] in 2*num_buckets additions
        JacP running = JacP::zero();
        JacP window_sum = JacP::zero();
        for (std::size_t d = num_buckets; d-- > 0;) {
            running = running.add(buckets[d]);
            window_sum = window_sum.add(running);
        }
        result = result.add(window_sum);
    }
    return result;
}

}  // namespace

G1 msm_g1(const std::vector<G1Affine>& bases, const std::vector<Limbs>& scalars) {
    return msm_impl<G1Affine, G1>(bases, scalars);
}

G2 msm_g2(const std::vector<G2Affine>& bases, const std::vector<Limbs>& scalars) {
    return msm_impl<G2Affine, G2>(bases, scalars);
}

// ===== FixedBaseTable =====

template <typename AffineP, typename JacP>
FixedBaseTable<AffineP, JacP>::FixedBaseTable(const AffineP& base, unsigned window_bits,
                                              unsigned scalar_bits)
    : window_bits_(window_bits) {
    if (window_bits < 1 || window_bits > 20) throw std::invalid_argument("bad window width");
    num_windows_ = (scalar_bits + window_bits - 1) / window_bits;
    stride_ = ((std::size_t)1 << window_bits) - 1;

    std::vector<JacP> jac;
    jac.reserve(num_windows_ * stride_);
    JacP window_base = JacP::from_affine(base);
    for (unsigned w = 0; w < num_windows_; ++w) {
        JacP acc = window_base;
        for (std::size_t d = 1; d <= stride_; ++d) {
            jac.push_back(acc);
            acc = acc.add(window_base);
        }
        window_base = acc;  // acc = 2^window_bits * window_base
    }
    table_ = batch_to_affine(jac);
}

template <typename AffineP, typename JacP>
JacP FixedBaseTable<AffineP, JacP>::mul(const Limbs& scalar) const {
    JacP acc = JacP::zero();
    for (unsigned w = 0; w < num_windows_; ++w) {
        unsigned bit = w * window_bits_;
        if (bit >= 256) break;
        unsigned limb = bit / 64, off = bit % 64;
        std::uint64_t d = scalar[limb] >> off;
        if (off + window_bits_ > 64 && limb + 1 < 4) d |= scalar[limb + 1] << (64 - off);
        d &= ((std::uint64_t)1 << window_bits_) - 1;
        if (d != 0) acc = acc.madd(table_[w * stride_ + (std::size_t)d - 1]);
    }
    return acc;
}

template class FixedBaseTable<G1Affine, G1>;
template class FixedBaseTable<G2Affine, G2>;

}  // namespace ec
}  // namespace zkperm
