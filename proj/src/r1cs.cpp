#include "zkperm/r1cs.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace zkperm {
namespace r1cs {

static_assert(sizeof(Term) == 16, "term must stay 16 bytes");
static_assert(sizeof(Row) == 16, "row must stay 16 bytes");

namespace {

constexpr std::uint64_t kSmallLimit = 1ull << 62;

// merge duplicate variables and drop zero coefficients
void normalize(LinComb& lc) {
    std::sort(lc.begin(), lc.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < lc.size();) {
        u32 var = lc[i].first;
        Fr sum = lc[i].second;
        std::size_t j = i + 1;
        while (j < lc.size() && lc[j].first == var) {
            sum = sum + lc[j].second;
            ++j;
        }
        if (!sum.is_zero()) lc[out++] = {var, sum};
        i = j;
    }
    lc.resize(out);
}

}  // namespace

u32 ConstraintSystem::intern_coeff(const Fr& c, std::int64_t& small_out) {
    ff::Limbs v = c.to_limbs();
    if (v[1] == 0 && v[2] == 0 && v[3] == 0 && v[0] < kSmallLimit) {
        small_out = (std::int64_t)v[0];
        return kInlineCoeff;
    }
    ff::Limbs n = (-c).to_limbs();
    if (n[1] == 0 && n[2] == 0 && n[3] == 0 && n[0] < kSmallLimit) {
        small_out = -(std::int64_t)n[0];
        return kInlineCoeff;
    }
    small_out = 0;
    std::uint64_t key = v[0] ^ (v[1] * 0x9e3779b97f4a7c15ull) ^ v[3];
    auto range = big_index_.equal_range(key);
    for (auto it = range.first; it != range.second; ++it) {
        if (big_coeffs_[it->second] == c) return it->second;
    }
    big_coeffs_.push_back(c);
    u32 idx = (u32)(big_coeffs_.size() - 1);
    big_index_.emplace(key, idx);
    return idx;
}

void ConstraintSystem::append_terms(const LinComb& lc) {
    for (const auto& [var, coeff] : lc) {
        Term t;
        t.var = var;
        t.big = intern_coeff(coeff, t.small);
        terms_.push_back(t);
    }
}

void ConstraintSystem::add_constraint(const LinComb& a, const LinComb& b, const LinComb& c) {
    LinComb na = a, nb = b, nc = c;
    normalize(na);
    normalize(nb);
    normalize(nc);
    Row row;
    row.a_begin = (u32)terms_.size();
    append_terms(na);
    row.b_begin = (u32)terms_.size();
    append_terms(nb);
    row.c_begin = (u32)terms_.size();
    append_terms(nc);
    row.end = (u32)terms_.size();
    rows_.push_back(row);
}

Fr ConstraintSystem::eval_terms(std::span<const Term> terms, const std::vector<Fr>& z) const {
    Fr acc = Fr::zero();
    for (const Term& t : terms) {
        if (t.big == kInlineCoeff) {
            if (t.small == 1) {
                acc = acc + z[t.var];
                continue;
            }
            if (t.small == -1) {
                acc = acc - z[t.var];
                continue;
            }
        }
        acc = acc + term_coeff(t) * z[t.var];
    }
    return acc;
}

bool ConstraintSystem::satisfied(const std::vector<Fr>& z) const {
    return first_violation(z) == rows_.size();
}

std::size_t ConstraintSystem::first_violation(const std::vector<Fr>& z) const {
    if (z.size() != num_variables_) throw std::invalid_argument("assignment size mismatch");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        Fr a = eval_terms(row_a(i), z);
        Fr b = eval_terms(row_b(i), z);
        Fr c = eval_terms(row_c(i), z);
        if (!(a * b == c)) return i;
    }
    return rows_.size();
}

// ===== Artifact serialization =====
//
// Little-endian layout:
//   magic "ZKECS1\0\0" | num_vars u32 | num_public u32 | scheme u32 |
//   condition_count u32 | merkle_depth u32 | num_big u32 | num_rows u64 |
//   num_terms u64 | big coeffs (32B canonical each) | rows | terms

namespace {

constexpr char kMagic[8] = {'Z', 'K', 'E', 'C', 'S', '1', 0, 0};

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_all(std::FILE* f, const void* data, std::size_t n) {
    if (std::fwrite(data, 1, n, f) != n) throw std::runtime_error("constraint file write failed");
}

void read_all(std::FILE* f, void* data, std::size_t n) {
    if (std::fread(data, 1, n, f) != n) throw std::runtime_error("constraint file truncated");
}

void put_u32(std::FILE* f, u32 v) {
    std::uint8_t b[4] = {(std::uint8_t)v, (std::uint8_t)(v >> 8), (std::uint8_t)(v >> 16),
                         (std::uint8_t)(v >> 24)};
    write_all(f, b, 4);
}

void put_u64(std::FILE* f, std::uint64_t v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = (std::uint8_t)(v >> (8 * i));
    write_all(f, b, 8);
}

u32 get_u32(std::FILE* f) {
    std::uint8_t b[4];
    read_all(f, b, 4);
    return (u32)b[0] | ((u32)b[1] << 8) | ((u32)b[2] << 16) | ((u32)b[3] << 24);
}

std::uint64_t get_u64(std::FILE* f) {
    std::uint8_t b[8];
    read_all(f, b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= (std::uint64_t)b[i] << (8 * i);
    return v;
}

}  // namespace

void ConstraintSystem::save(const std::filesystem::path& path) const {
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw std::runtime_error("cannot open constraint file for writing: " + path.string());
    write_all(f.get(), kMagic, 8);
    put_u32(f.get(), num_variables_);
    put_u32(f.get(), num_public_);
    put_u32(f.get(), metadata.scheme);
    put_u32(f.get(), metadata.condition_count);
    put_u32(f.get(), metadata.merkle_depth);
    put_u32(f.get(), (u32)big_coeffs_.size());
    put_u64(f.get(), rows_.size());
    put_u64(f.get(), terms_.size());
    for (const Fr& c : big_coeffs_) {
        std::uint8_t enc[32];
        ff::field_to_bytes(c, enc);
        write_all(f.get(), enc, 32);
    }
    if (!rows_.empty()) write_all(f.get(), rows_.data(), rows_.size() * sizeof(Row));
    if (!terms_.empty()) write_all(f.get(), terms_.data(), terms_.size() * sizeof(Term));
}

ConstraintSystem ConstraintSystem::load(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) throw std::runtime_error("cannot open constraint file: " + path.string());
    char magic[8];
    read_all(f.get(), magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("bad constraint file magic");
    ConstraintSystem cs;
    cs.num_variables_ = get_u32(f.get());
    cs.num_public_ = get_u32(f.get());
    cs.metadata.scheme = get_u32(f.get());
    cs.metadata.condition_count = get_u32(f.get());
    cs.metadata.merkle_depth = get_u32(f.get());
    u32 num_big = get_u32(f.get());
    std::uint64_t num_rows = get_u64(f.get());
    std::uint64_t num_terms = get_u64(f.get());
    cs.big_coeffs_.reserve(num_big);
    for (u32 i = 0; i < num_big; ++i) {
        std::uint8_t enc[32];
        read_all(f.get(), enc, 32);
        cs.big_coeffs_.push_back(ff::field_from_bytes_strict<Fr>(enc));
    }
    cs.rows_.resize(num_rows);
    if (num_rows) read_all(f.get(), cs.rows_.data(), num_rows * sizeof(Row));
    cs.terms_.resize(num_terms);
    if (num_terms) read_all(f.get(), cs.terms_.data(), num_terms * sizeof(Term));
    return cs;
}

}  // namespace r1cs
}  // namespace zkperm
