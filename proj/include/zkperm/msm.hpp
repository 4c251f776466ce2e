#pragma once

#include <vector>

#include "zkperm/curve.hpp"

namespace zkperm {
namespace ec {

// ===== Multi-scalar multiplication =====

// Pippenger bucket method. Scalars are plain integers (non-Montgomery limbs).
// Zero scalars and infinity points are skipped, so sparse or bit-valued
// scalar vectors cost far less than dense ones.
G1 msm_g1(const std::vector<G1Affine>& bases, const std::vector<ff::Limbs>& scalars);
G2 msm_g2(const std::vector<G2Affine>& bases, const std::vector<ff::Limbs>& scalars);

// ===== Fixed-base scalar multiplication =====

// Precomputed windowed table for repeated multiplication of one base point.
// Used by the setup to expand query vectors [f(tau)]·G for thousands of f.
template <typename AffineP, typename JacP>
class FixedBaseTable {
  public:
    FixedBaseTable(const AffineP& base, unsigned window_bits, unsigned scalar_bits = 256);

    JacP mul(const ff::Limbs& scalar) const;

  private:
    unsigned window_bits_;
    unsigned num_windows_;
    // table_[w * stride_ + d] = (d << (w * window_bits)) * base, d in [1, 2^w)
    std::vector<AffineP> table_;
    std::size_t stride_;
};

using FixedBaseG1 = FixedBaseTable<G1Affine, G1>;
using FixedBaseG2 = FixedBaseTable<G2Affine, G2>;

}  // namespace ec
}  // namespace zkperm
