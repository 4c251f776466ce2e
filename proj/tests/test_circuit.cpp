#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <random>

#include "doctest.h"
#include "zkperm/policy_circuit.hpp"

using namespace zkperm;
using namespace zkperm::circuit;
using enc::Attribute;
using enc::AttributeValue;
using policy::Condition;
using policy::Op;
using policy::Scheme;

namespace {

// ===== Shared fixtures =====
//
// Compiling is the expensive step, so equivalence cases are grouped by
// circuit shape and each compiled system is reused for many witnesses.

struct Fixture {
    crypto::SignatureKeyPair issuer = crypto::ds_keygen(bytes_of("circuit-issuer"));
    crypto::SignatureKeyPair subject = crypto::ds_keygen(bytes_of("circuit-subject"));
    policy::AuxData aux;

    Fixture() {
        std::vector<AttributeValue> colors, numbers;
        for (const char* c : {"red", "green", "blue", "cyan", "plum"})
            colors.push_back(AttributeValue::make_string(c));
        for (int i : {10, 20, 30, 40, 50, 60, 70})
            numbers.push_back(AttributeValue::make_int(i));
        aux.sets.emplace("colors", policy::MembershipSet(colors, 3));
        aux.sets.emplace("numbers", policy::MembershipSet(numbers, 3));
        aux.current_timestamp = 1700000000;
    }
};

Fixture& fixture() {
    static Fixture fx;
    return fx;
}

struct CompiledSpec {
    CircuitSpec spec;
    r1cs::ConstraintSystem cs;
};

CompiledSpec& compiled(const std::vector<Condition>& conditions, Scheme scheme) {
    static std::map<std::string, CompiledSpec> cache;
    CircuitSpec spec;
    spec.conditions = conditions;
    spec.scheme = scheme;
    spec.merkle_depth = 3;
    spec.issuer_public_key = fixture().issuer.public_key;
    const std::string key = crypto::digest_hex(circuit_digest(spec));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, CompiledSpec{spec, compile_policy_circuit(spec)}).first;
    return it->second;
}

// Issues a credential covering the condition keys, builds the witness, and
// returns whether the constraint system accepts it. The oracle answer is the
// conjunction of comp_check_plain over all conditions.
struct CaseResult {
    bool circuit_ok;
    bool oracle_ok;
};

CaseResult run_case(const std::vector<Condition>& conditions, Scheme scheme,
                    const std::vector<Attribute>& attributes, std::uint64_t nonce_salt) {
    Fixture& fx = fixture();
    CompiledSpec& c = compiled(conditions, scheme);

    identity::CredentialSchema schema;
    schema.schema_id = "equiv";
    for (const auto& a : attributes)
        schema.attribute_specs.push_back({a.key, a.value.kind, true});
    const auto vc = identity::issue_credential(fx.issuer.secret_key, fx.subject.public_key,
                                               attributes, schema);

    WitnessInputs inputs;
    inputs.nonce = ff::Fr::from_u64(nonce_salt * 2654435761u + 12345);
    crypto::HashDigest nd{};
    ff::field_to_bytes(inputs.nonce, nd.data());
    inputs.subject_public_key = fx.subject.public_key;
    inputs.key_signature = crypto::ds_sign_digest(fx.subject.secret_key, nd);
    inputs.timestamp = spec_uses_timestamp(c.spec) ? fx.aux.current_timestamp : 0;

    bool witness_available = true;
    for (const std::string& key : claim_keys(c.spec)) {
        const identity::Claim* claim = vc.find_claim(key);
        REQUIRE(claim != nullptr);
        const std::size_t idx = claim - vc.claims.data();
        inputs.claims.push_back(
            {enc::value_repr(claim->attribute.value), vc.claim_signatures[idx]});
        inputs.claim_hashes.push_back(identity::claim_hash(*claim));
    }
    for (const Condition& cond : conditions) {
        if (!policy::op_is_membership(cond.op)) continue;
        const auto& set = fx.aux.resolve(cond.set_ref);
        const auto repr = enc::value_repr(vc.find_claim(cond.key)->attribute.value);
        MembershipWitness mw;
        if (cond.op == Op::IN) {
            const auto idx = set.leaf_index(repr);
            if (!idx) {
                witness_available = false;  // honest holder cannot even try
            } else {
                mw.path = set.in_path(*idx);
            }
            inputs.roots.push_back(set.in_root());
        } else {
            const auto gap = set.gap_witness(repr);
            if (!gap) {
                witness_available = false;
            } else {
                mw.lower = gap->lower;
                mw.upper = gap->upper;
                mw.path = gap->path;
            }
            inputs.roots.push_back(set.gap_root());
        }
        inputs.memberships.push_back(mw);
    }

    CaseResult r{};
    r.oracle_ok = true;
    for (const Condition& cond : conditions)
        r.oracle_ok = r.oracle_ok &&
                      policy::comp_check_plain(vc.find_claim(cond.key)->attribute, cond, fx.aux);

    if (!witness_available) {
        // membership structure itself rules the case out; the oracle must agree
        r.circuit_ok = false;
        REQUIRE_FALSE(r.oracle_ok);
        return r;
    }
    const auto assignment = generate_witness(c.spec, c.cs, inputs);
    r.circuit_ok = c.cs.satisfied(assignment);
    return r;
}

Condition make_cond(const std::string& key, Op op, AttributeValue v, std::string set_ref = "",
                    bool time_rel = false) {
    Condition c;
    c.key = key;
    c.op = op;
    c.value = std::move(v);
    c.set_ref = std::move(set_ref);
    c.time_relative = time_rel;
    return c;
}

}  // namespace

// ===== Circuit/oracle equivalence, both schemes =====

TEST_CASE("equality and inequality match the oracle on string and integer values") {
    int cases = 0;
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve}) {
        const std::vector<Condition> conditions = {
            make_cond("tier", Op::EQ, AttributeValue::make_string("gold")),
            make_cond("cap", Op::NEQ, AttributeValue::make_int(0))};
        for (const char* tier : {"gold", "silver", "g", "goldx", ""})
            for (std::int64_t cap : {0, 1, -1, 123456789}) {
                const auto r = run_case(conditions, scheme,
                                        {{"tier", AttributeValue::make_string(tier)},
                                         {"cap", AttributeValue::make_int(cap)}},
                                        ++cases);
                CHECK(r.circuit_ok == r.oracle_ok);
            }
    }
    CHECK(cases == 40);
}

TEST_CASE("range operators match the oracle at boundaries and extremes") {
    int cases = 0;
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve})
        for (Op op : {Op::GEQ, Op::LEQ, Op::GT, Op::LT}) {
            const std::vector<Condition> conditions = {
                make_cond("score", op, AttributeValue::make_int(100))};
            for (std::int64_t v : {(std::int64_t)99, (std::int64_t)100, (std::int64_t)101,
                                   (std::int64_t)0, (std::int64_t)-100, (std::int64_t)1 << 40,
                                   -((std::int64_t)1 << 40)}) {
                const auto r = run_case(conditions, scheme,
                                        {{"score", AttributeValue::make_int(v)}}, ++cases);
                CHECK(r.circuit_ok == r.oracle_ok);
            }
        }
    CHECK(cases == 56);
}

TEST_CASE("time-relative range matches the oracle around the cutoff") {
    int cases = 0;
    const std::int64_t now = fixture().aux.current_timestamp;
    const std::int64_t cutoff = now - policy::kEighteenYearsSeconds;
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve}) {
        const std::vector<Condition> conditions = {make_cond(
            "date_of_birth", Op::LEQ,
            AttributeValue::make_int(policy::kEighteenYearsSeconds), "", true)};
        for (std::int64_t dob : {cutoff - 86400, cutoff - 1, cutoff, cutoff + 1, now}) {
            const auto r = run_case(conditions, scheme,
                                    {{"date_of_birth", AttributeValue::make_date(dob)}},
                                    ++cases);
            CHECK(r.circuit_ok == r.oracle_ok);
        }
    }
    CHECK(cases == 10);
}

TEST_CASE("membership operators match the oracle for members and outsiders") {
    int cases = 0;
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve})
        for (Op op : {Op::IN, Op::NOTIN}) {
            const std::vector<Condition> conditions = {
                make_cond("color", op, AttributeValue{}, "set:colors")};
            for (const char* v : {"red", "green", "blue", "cyan", "plum", "mauve", "RED",
                                  "re", "redd", ""}) {
                const auto r = run_case(conditions, scheme,
                                        {{"color", AttributeValue::make_string(v)}}, ++cases);
                CHECK(r.circuit_ok == r.oracle_ok);
            }
        }
    CHECK(cases == 40);
}

TEST_CASE("integer membership matches the oracle") {
    int cases = 0;
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve})
        for (Op op : {Op::IN, Op::NOTIN}) {
            const std::vector<Condition> conditions = {
                make_cond("amount", op, AttributeValue{}, "set:numbers")};
            for (std::int64_t v : {10, 20, 70, 5, 15, 75, 0, -10}) {
                const auto r = run_case(conditions, scheme,
                                        {{"amount", AttributeValue::make_int(v)}}, ++cases);
                CHECK(r.circuit_ok == r.oracle_ok);
            }
        }
    CHECK(cases == 32);
}

TEST_CASE("mixed multi-condition policies match the oracle") {
    int cases = 0;
    const std::vector<Condition> conditions = {
        make_cond("country", Op::EQ, AttributeValue::make_string("DE")),
        make_cond("age", Op::GEQ, AttributeValue::make_int(18)),
        make_cond("color", Op::IN, AttributeValue{}, "set:colors"),
        make_cond("amount", Op::NOTIN, AttributeValue{}, "set:numbers")};
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve})
        for (const char* country : {"DE", "US"})
            for (std::int64_t age : {17, 18})
                for (const char* color : {"red", "mud"})
                    for (std::int64_t amount : {20, 25}) {
                        const auto r = run_case(conditions, scheme,
                                                {{"country", AttributeValue::make_string(country)},
                                                 {"age", AttributeValue::make_int(age)},
                                                 {"color", AttributeValue::make_string(color)},
                                                 {"amount", AttributeValue::make_int(amount)}},
                                                ++cases);
                        CHECK(r.circuit_ok == r.oracle_ok);
                    }
    CHECK(cases == 32);
}

// ===== Witness structure and binding =====

TEST_CASE("dishonest witnesses break satisfaction, one field at a time") {
    Fixture& fx = fixture();
    const std::vector<Condition> conditions = {
        make_cond("tier", Op::EQ, AttributeValue::make_string("gold"))};
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve}) {
        CompiledSpec& c = compiled(conditions, scheme);
        identity::CredentialSchema schema;
        schema.schema_id = "bind";
        schema.attribute_specs = {{"tier", enc::ValueKind::String, true}};
        const auto vc = identity::issue_credential(
            fx.issuer.secret_key, fx.subject.public_key,
            {{"tier", AttributeValue::make_string("gold")}}, schema);

        WitnessInputs good;
        good.nonce = ff::Fr::from_u64(777);
        crypto::HashDigest nd{};
        ff::field_to_bytes(good.nonce, nd.data());
        good.subject_public_key = fx.subject.public_key;
        good.key_signature = crypto::ds_sign_digest(fx.subject.secret_key, nd);
        good.claims = {{enc::value_repr(vc.claims[0].attribute.value), vc.claim_signatures[0]}};
        good.claim_hashes = {identity::claim_hash(vc.claims[0])};
        REQUIRE(c.cs.satisfied(generate_witness(c.spec, c.cs, good)));

        // public claim hash swapped for a different claim's hash
        WitnessInputs bad_hash = good;
        bad_hash.claim_hashes[0][5] ^= 1;
        CHECK_FALSE(c.cs.satisfied(generate_witness(c.spec, c.cs, bad_hash)));

        // value that does not satisfy the condition
        WitnessInputs bad_value = good;
        bad_value.claims[0].value_repr = enc::value_repr(AttributeValue::make_string("lead"));
        CHECK_FALSE(c.cs.satisfied(generate_witness(c.spec, c.cs, bad_value)));

        // nonce signature from the wrong key
        WitnessInputs bad_signer = good;
        const auto impostor = crypto::ds_keygen(bytes_of("impostor"));
        bad_signer.key_signature = crypto::ds_sign_digest(impostor.secret_key, nd);
        CHECK_FALSE(c.cs.satisfied(generate_witness(c.spec, c.cs, bad_signer)));

        // subject key swapped: binding signature verifies but claim hash breaks
        WitnessInputs bad_subject = good;
        bad_subject.subject_public_key = impostor.public_key;
        bad_subject.key_signature = crypto::ds_sign_digest(impostor.secret_key, nd);
        CHECK_FALSE(c.cs.satisfied(generate_witness(c.spec, c.cs, bad_subject)));

        if (scheme == Scheme::Baseline) {
            // baseline carries the issuer signature in-circuit
            WitnessInputs bad_issuer = good;
            bad_issuer.claims[0].issuer_signature =
                crypto::ds_sign_digest(impostor.secret_key, good.claim_hashes[0]);
            CHECK_FALSE(c.cs.satisfied(generate_witness(c.spec, c.cs, bad_issuer)));
        }
    }
}

TEST_CASE("mutating any public input breaks satisfaction") {
    Fixture& fx = fixture();
    const std::vector<Condition> conditions = {
        make_cond("color", Op::IN, AttributeValue{}, "set:colors")};
    CompiledSpec& c = compiled(conditions, Scheme::CommitAndProve);

    identity::CredentialSchema schema;
    schema.schema_id = "pub";
    schema.attribute_specs = {{"color", enc::ValueKind::String, true}};
    const auto vc = identity::issue_credential(fx.issuer.secret_key, fx.subject.public_key,
                                               {{"color", AttributeValue::make_string("red")}},
                                               schema);
    const auto& set = fx.aux.sets.at("colors");
    const auto repr = enc::value_repr(vc.claims[0].attribute.value);

    WitnessInputs inputs;
    inputs.nonce = ff::Fr::from_u64(31337);
    crypto::HashDigest nd{};
    ff::field_to_bytes(inputs.nonce, nd.data());
    inputs.subject_public_key = fx.subject.public_key;
    inputs.key_signature = crypto::ds_sign_digest(fx.subject.secret_key, nd);
    inputs.claims = {{repr, vc.claim_signatures[0]}};
    inputs.claim_hashes = {identity::claim_hash(vc.claims[0])};
    MembershipWitness mw;
    mw.path = set.in_path(*set.leaf_index(repr));
    inputs.memberships = {mw};
    inputs.roots = {set.in_root()};

    auto assignment = generate_witness(c.spec, c.cs, inputs);
    REQUIRE(c.cs.satisfied(assignment));
    // num_public counts the declared statement slots; the constant wire sits
    // in front of them at assignment index 0
    REQUIRE(c.cs.num_public() == public_input_count(c.spec));

    // every public slot (skipping the constant wire) is load-bearing
    for (u32 i = 1; i <= c.cs.num_public(); ++i) {
        auto mutated = assignment;
        mutated[i] = mutated[i] + ff::Fr::one();
        CHECK_FALSE(c.cs.satisfied(mutated));
    }
}

TEST_CASE("a baseline-satisfying statement also satisfies commit-and-prove") {
    // same conditions, same credential: the cp circuit is the baseline circuit
    // minus the in-circuit issuer checks, so baseline success implies cp success
    const std::vector<Condition> conditions = {
        make_cond("tier", Op::EQ, AttributeValue::make_string("gold")),
        make_cond("score", Op::GEQ, AttributeValue::make_int(10))};
    for (std::int64_t score : {10, 9}) {
        const std::vector<Attribute> attrs = {{"tier", AttributeValue::make_string("gold")},
                                              {"score", AttributeValue::make_int(score)}};
        const auto base = run_case(conditions, Scheme::Baseline, attrs, 1);
        const auto cp = run_case(conditions, Scheme::CommitAndProve, attrs, 1);
        CHECK(base.circuit_ok == cp.circuit_ok);
        if (base.circuit_ok) CHECK(cp.circuit_ok);
    }
}

// ===== Shape properties =====

TEST_CASE("constraint counts grow strictly and cp is always smaller") {
    for (const char* type : {"equal", "range", "member"}) {
        std::size_t prev_base = 0, prev_cp = 0;
        for (unsigned n : {1u, 2u, 3u, 4u}) {
            std::vector<Condition> conditions;
            for (unsigned i = 0; i < n; ++i) {
                const std::string key = "k" + std::to_string(i);
                if (std::string(type) == "equal")
                    conditions.push_back(make_cond(key, Op::EQ, AttributeValue::make_string("v")));
                else if (std::string(type) == "range")
                    conditions.push_back(make_cond(key, Op::GEQ, AttributeValue::make_int(1)));
                else
                    conditions.push_back(make_cond(key, Op::IN, AttributeValue{}, "set:colors"));
            }
            CircuitSpec base{conditions, Scheme::Baseline, 3, fixture().issuer.public_key};
            CircuitSpec cp{conditions, Scheme::CommitAndProve, 3, fixture().issuer.public_key};
            const std::size_t nb = compile_policy_circuit(base).num_constraints();
            const std::size_t ncp = compile_policy_circuit(cp).num_constraints();
            CHECK(nb > prev_base);
            CHECK(ncp > prev_cp);
            CHECK(ncp < nb);
            prev_base = nb;
            prev_cp = ncp;
        }
    }
}

TEST_CASE("constraint count is exactly affine in the condition count") {
    for (Scheme scheme : {Scheme::Baseline, Scheme::CommitAndProve}) {
        std::vector<std::size_t> counts;
        for (unsigned n : {1u, 2u, 3u, 4u, 5u}) {
            std::vector<Condition> conditions;
            for (unsigned i = 0; i < n; ++i)
                conditions.push_back(
                    make_cond("k" + std::to_string(i), Op::GEQ, AttributeValue::make_int(7)));
            CircuitSpec spec{conditions, scheme, 3, fixture().issuer.public_key};
            counts.push_back(compile_policy_circuit(spec).num_constraints());
        }
        const std::size_t step = counts[1] - counts[0];
        for (std::size_t i = 2; i < counts.size(); ++i)
            CHECK(counts[i] - counts[i - 1] == step);
    }
}

TEST_CASE("circuit digest binds every compile input") {
    const std::vector<Condition> c1 = {make_cond("a", Op::EQ, AttributeValue::make_int(1))};
    const std::vector<Condition> c2 = {make_cond("a", Op::EQ, AttributeValue::make_int(2))};
    CircuitSpec s{c1, Scheme::CommitAndProve, 3, fixture().issuer.public_key};
    const auto base = circuit_digest(s);

    CircuitSpec other = s;
    other.conditions = c2;
    CHECK(circuit_digest(other) != base);
    other = s;
    other.scheme = Scheme::Baseline;
    CHECK(circuit_digest(other) != base);
    other = s;
    other.merkle_depth = 4;
    CHECK(circuit_digest(other) != base);
    other = s;
    other.issuer_public_key = crypto::ds_keygen(bytes_of("other issuer")).public_key;
    // cp circuits do not embed the issuer key; baseline circuits do
    CHECK(circuit_digest(other) == base);
    CircuitSpec b1 = s, b2 = other;
    b1.scheme = b2.scheme = Scheme::Baseline;
    CHECK(circuit_digest(b1) != circuit_digest(b2));

    // digest equality implies identical compiled systems
    CHECK(circuit_digest(s) == circuit_digest(CircuitSpec{c1, Scheme::CommitAndProve, 3,
                                                          fixture().issuer.public_key}));
}

TEST_CASE("compilation rejects malformed specs") {
    CHECK_THROWS_AS(compile_policy_circuit(CircuitSpec{}), std::invalid_argument);
    std::vector<Condition> bad = {make_cond("k", Op::IN, AttributeValue{}, "")};
    CHECK_THROWS_AS(compile_policy_circuit(CircuitSpec{bad, Scheme::CommitAndProve, 3,
                                                       fixture().issuer.public_key}),
                    std::invalid_argument);
}
