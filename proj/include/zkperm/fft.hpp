#pragma once

#include <vector>

#include "zkperm/field.hpp"

namespace zkperm {
namespace ff {

// ===== Radix-2 evaluation domain over Fr =====

// Subgroup of size 2^k generated by a primitive root of unity; supports the
// polynomial transforms needed by the quadratic-arithmetic-program reduction.
class EvaluationDomain {
  public:
    explicit EvaluationDomain(std::size_t min_size);

    std::size_t size() const { return size_; }
    const Fr& generator() const { return omega_; }

    // in-place NTT: coefficients -> evaluations over the subgroup
    void fft(std::vector<Fr>& a) const;
    // inverse: evaluations -> coefficients
    void ifft(std::vector<Fr>& a) const;

    // transforms over the coset g·<omega>, g the multiplicative generator
    void coset_fft(std::vector<Fr>& a) const;
    void coset_ifft(std::vector<Fr>& a) const;

    // Z_H(x) = x^size - 1 evaluated on the coset is the constant
    // g^size - 1; its inverse divides out the vanishing polynomial.
    Fr vanishing_on_coset_inverse() const;

    // Lagrange coefficients L_i(t) for all i, used by the trusted setup.
    std::vector<Fr> lagrange_coeffs(const Fr& t) const;

  private:
    std::size_t size_;
    unsigned log_size_;
    Fr omega_;
    Fr omega_inv_;
    Fr size_inv_;
};

}  // namespace ff
}  // namespace zkperm
