#include "zkperm/fft.hpp"

#include <stdexcept>

#include "zkperm/field_tower.hpp"

namespace zkperm {
namespace ff {

// the multiplicative generator of Fr*, also the Tonelli-Shanks base
static const Fr kCosetShift = Fr::from_u64(5);

EvaluationDomain::EvaluationDomain(std::size_t min_size) {
    if (min_size == 0) throw std::invalid_argument("domain size must be positive");
    size_ = 1;
    log_size_ = 0;
    while (size_ < min_size) {
        size_ <<= 1;
        ++log_size_;
    }
    if (log_size_ > 28) throw std::invalid_argument("domain exceeds the field's 2-adicity");
    omega_ = fr_root_of_unity(log_size_ == 0 ? 1 : log_size_);
    if (log_size_ == 0) omega_ = Fr::one();
    omega_inv_ = omega_.inverse();
    size_inv_ = Fr::from_u64((std::uint64_t)size_).inverse();
}

static void ntt(std::vector<Fr>& a, const Fr& omega, unsigned log_n) {
    std::size_t n = a.size();
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (unsigned s = 1; s <= log_n; ++s) {
        std::size_t m = (std::size_t)1 << s;
        Fr wm = omega;
        for (unsigned k = s; k < log_n; ++k) wm = wm.square();
        for (std::size_t start = 0; start < n; start += m) {
            Fr w = Fr::one();
            for (std::size_t j = 0; j < m / 2; ++j) {
                Fr t = w * a[start + j + m / 2];
                Fr u = a[start + j];
                a[start + j] = u + t;
                a[start + j + m / 2] = u - t;
                w = w * wm;
            }
        }
    }
}

void EvaluationDomain::fft(std::vector<Fr>& a) const {
    if (a.size() != size_) a.resize(size_, Fr::zero());
    if (size_ == 1) return;
    ntt(a, omega_, log_size_);
}

void EvaluationDomain::ifft(std::vector<Fr>& a) const {
    if (a.size() != size_) a.resize(size_, Fr::zero());
    if (size_ == 1) return;
    ntt(a, omega_inv_, log_size_);
    for (Fr& x : a) x = x * size_inv_;
}

void EvaluationDomain::coset_fft(std::vector<Fr>& a) const {
    if (a.size() != size_) a.resize(size_, Fr::zero());
    Fr g = Fr::one();
    for (Fr& x : a) {
        x = x * g;
        g = g * kCosetShift;
    }
    fft(a);
}

void EvaluationDomain::coset_ifft(std::vector<Fr>& a) const {
    ifft(a);
    Fr ginv = kCosetShift.inverse();
    Fr g = Fr::one();
    for (Fr& x : a) {
        x = x * g;
        g = g * ginv;
    }
}

Fr EvaluationDomain::vanishing_on_coset_inverse() const {
    Fr g = kCosetShift;
    Fr gn = g.pow(std::uint64_t(size_));
    return (gn - Fr::one()).inverse();
}

std::vector<Fr> EvaluationDomain::lagrange_coeffs(const Fr& t) const {
    // L_i(t) = (t^n - 1) / (n * omega^{-i} * (t - omega^i))   when t outside the domain
    std::vector<Fr> out(size_);
    Fr tn = t.pow(std::uint64_t(size_));
    Fr zt = tn - Fr::one();
    if (zt.is_zero()) {
        // t landed inside the domain: exactly one indicator coefficient
        Fr w = Fr::one();
        for (std::size_t i = 0; i < size_; ++i) {
            out[i] = (w == t) ? Fr::one() : Fr::zero();
            w = w * omega_;
        }
        return out;
    }
    // batch-invert the denominators
    std::vector<Fr> denom(size_);
    Fr w = Fr::one();
    for (std::size_t i = 0; i < size_; ++i) {
        denom[i] = (t - w) * Fr::from_u64((std::uint64_t)size_);
        w = w * omega_;
    }
    std::vector<Fr> prefix(size_);
    Fr run = Fr::one();
    for (std::size_t i = 0; i < size_; ++i) {
        prefix[i] = run;
        run = run * denom[i];
    }
    Fr inv = run.inverse();
    w = Fr::one();  // omega^i accumulates forward; walk backwards for inverses
    std::vector<Fr> wpow(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        wpow[i] = w;
        w = w * omega_;
    }
    for (std::size_t i = size_; i-- > 0;) {
        Fr di = inv * prefix[i];
        inv = inv * denom[i];
        out[i] = zt * wpow[i] * di;
    }
    return out;
}

}  // namespace ff
}  // namespace zkperm
