#pragma once

// Optimal ate pairing e : G1 x G2 -> mu_r in Fq12.
//
// The Miller loop runs over points embedded into the full-extension curve
// E(Fq12) with plain affine line functions. That trades some speed for a
// formulation that is easy to audit; verification cost is dominated by the
// proof system's MSMs anyway.

#include "zkperm/curve.hpp"

#include <utility>
#include <vector>

namespace zkperm {
namespace ec {

using ff::Fq12;

// Miller loop value before the final exponentiation.
Fq12 miller_loop(const G1Affine& p, const G2Affine& q);

// f^((q^12 - 1) / r)
Fq12 final_exponentiation(const Fq12& f);

Fq12 pairing(const G1Affine& p, const G2Affine& q);

// prod_i e(p_i, q_i), sharing a single final exponentiation
Fq12 pairing_product(const std::vector<std::pair<G1Affine, G2Affine>>& pairs);

}  // namespace ec
}  // namespace zkperm
