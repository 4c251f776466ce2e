#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "zkperm/field.hpp"

namespace zkperm {
namespace r1cs {

using ff::Fr;
using u32 = std::uint32_t;

// ===== Sparse constraint storage =====
//
// Rank-1 constraints A·z ∘ B·z = C·z. Terms live in one arena; each row
// stores three span boundaries into it. Coefficients up to +-2^62 are stored
// inline; anything larger goes through a deduplicated side table. At several
// million constraints this keeps the system in hundreds of megabytes.

struct Term {
    u32 var;
    u32 big;            // kInlineCoeff, or index into big_coeffs
    std::int64_t small;  // inline coefficient when big == kInlineCoeff
};

constexpr u32 kInlineCoeff = 0xffffffffu;

struct Row {
    u32 a_begin, b_begin, c_begin, end;
};

// transient builder form of a linear combination
using LinComb = std::vector<std::pair<u32, Fr>>;

class ConstraintSystem {
  public:
    // variable 0 is the constant one
    ConstraintSystem() : num_variables_(1), num_public_(0) {}

    u32 add_variable() { return num_variables_++; }
    void set_public_count(u32 n) { num_public_ = n; }

    u32 num_variables() const { return num_variables_; }
    // public input count, excluding the constant-one wire
    u32 num_public() const { return num_public_; }
    std::size_t num_constraints() const { return rows_.size(); }

    void add_constraint(const LinComb& a, const LinComb& b, const LinComb& c);

    // coefficient of a stored term
    Fr term_coeff(const Term& t) const {
        if (t.big != kInlineCoeff) return big_coeffs_[t.big];
        if (t.small >= 0) return Fr::from_u64((std::uint64_t)t.small);
        return -Fr::from_u64((std::uint64_t)(-t.small));
    }

    std::span<const Term> row_a(std::size_t i) const {
        return {terms_.data() + rows_[i].a_begin, rows_[i].b_begin - rows_[i].a_begin};
    }
    std::span<const Term> row_b(std::size_t i) const {
        return {terms_.data() + rows_[i].b_begin, rows_[i].c_begin - rows_[i].b_begin};
    }
    std::span<const Term> row_c(std::size_t i) const {
        return {terms_.data() + rows_[i].c_begin, rows_[i].end - rows_[i].c_begin};
    }

    Fr eval_terms(std::span<const Term> terms, const std::vector<Fr>& z) const;

    // full satisfaction check: every row holds under assignment z
    bool satisfied(const std::vector<Fr>& z) const;
    // index of the first violated row, or num_constraints() if satisfied
    std::size_t first_violation(const std::vector<Fr>& z) const;

    void save(const std::filesystem::path& path) const;
    static ConstraintSystem load(const std::filesystem::path& path);

    // scheme tag, condition count, merkle depth; carried in the artifact header
    struct Metadata {
        u32 scheme = 0;
        u32 condition_count = 0;
        u32 merkle_depth = 0;
    };
    Metadata metadata;

  private:
    u32 intern_coeff(const Fr& c, std::int64_t& small_out);
    void append_terms(const LinComb& lc);

    u32 num_variables_;
    u32 num_public_;
    std::vector<Term> terms_;
    std::vector<Row> rows_;
    std::vector<Fr> big_coeffs_;
    std::unordered_map<std::uint64_t, u32> big_index_;  // keyed by low limb of raw residue
};

// ===== Dual-mode circuit context =====
//
// Gadgets are written once and run twice: compile mode allocates variables
// and records constraints; witness mode allocates the same variables in the
// same order and records their values. Gadget code must never branch on
// values when deciding which constraints to emit.

class CircuitCtx {
  public:
    enum class Mode { Compile, Witness };

    CircuitCtx(Mode mode, ConstraintSystem& cs) : mode_(mode), cs_(&cs) {
        if (mode == Mode::Witness) values_.assign(1, Fr::one());
    }

    Mode mode() const { return mode_; }
    bool compiling() const { return mode_ == Mode::Compile; }
    ConstraintSystem& cs() { return *cs_; }

    u32 alloc(const Fr& value) {
        if (mode_ == Mode::Compile) return cs_->add_variable();
        values_.push_back(value);
        return (u32)(values_.size() - 1);
    }

    void constrain(const LinComb& a, const LinComb& b, const LinComb& c) {
        if (mode_ == Mode::Compile) cs_->add_constraint(a, b, c);
    }

    // witness-mode value of a variable; zero while compiling
    Fr value_of(u32 var) const {
        return mode_ == Mode::Compile ? Fr::zero() : values_[var];
    }

    // witness-mode evaluation of a linear combination; zero while compiling
    Fr eval(const LinComb& lc) const {
        if (mode_ == Mode::Compile) return Fr::zero();
        Fr acc = Fr::zero();
        for (const auto& [var, coeff] : lc) acc = acc + coeff * values_[var];
        return acc;
    }
    void set_value(u32 var, const Fr& v) { values_[var] = v; }
    std::vector<Fr>& values() { return values_; }

  private:
    Mode mode_;
    ConstraintSystem* cs_;
    std::vector<Fr> values_;
};

}  // namespace r1cs
}  // namespace zkperm
