#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "zkperm/policy.hpp"

using namespace zkperm;
using namespace zkperm::policy;
using enc::Attribute;
using enc::AttributeValue;

namespace {

Condition eq_cond(const std::string& key, const AttributeValue& v) {
    Condition c;
    c.key = key;
    c.op = Op::EQ;
    c.value = v;
    return c;
}

Condition range_cond(const std::string& key, Op op, std::int64_t v, bool time_rel = false) {
    Condition c;
    c.key = key;
    c.op = op;
    c.value = AttributeValue::make_int(v);
    c.time_relative = time_rel;
    return c;
}

Condition member_cond(const std::string& key, Op op, const std::string& set_name) {
    Condition c;
    c.key = key;
    c.op = op;
    c.set_ref = "set:" + set_name;
    return c;
}

AuxData countries_aux() {
    AuxData aux;
    aux.sets.emplace("eu", MembershipSet({AttributeValue::make_string("DE"),
                                          AttributeValue::make_string("FR"),
                                          AttributeValue::make_string("IT"),
                                          AttributeValue::make_string("ES"),
                                          AttributeValue::make_string("NL")},
                                         3));
    return aux;
}

}  // namespace

// ===== Single-condition evaluation =====

TEST_CASE("equality and inequality on every value kind") {
    AuxData aux;
    const Attribute country{"country", AttributeValue::make_string("DE")};
    CHECK(comp_check_plain(country, eq_cond("country", AttributeValue::make_string("DE")), aux));
    CHECK_FALSE(
        comp_check_plain(country, eq_cond("country", AttributeValue::make_string("FR")), aux));

    const Attribute level{"level", AttributeValue::make_int(-3)};
    CHECK(comp_check_plain(level, eq_cond("level", AttributeValue::make_int(-3)), aux));
    Condition neq = eq_cond("level", AttributeValue::make_int(-3));
    neq.op = Op::NEQ;
    CHECK_FALSE(comp_check_plain(level, neq, aux));
    neq.value = AttributeValue::make_int(4);
    CHECK(comp_check_plain(level, neq, aux));

    CHECK_THROWS_AS(comp_check_plain({"other", AttributeValue::make_int(1)},
                                     eq_cond("level", AttributeValue::make_int(1)), aux),
                    std::invalid_argument);
}

TEST_CASE("range operators at and around the boundary") {
    AuxData aux;
    const auto check = [&](std::int64_t lhs, Op op, std::int64_t rhs) {
        return comp_check_plain({"v", AttributeValue::make_int(lhs)}, range_cond("v", op, rhs),
                                aux);
    };
    CHECK(check(5, Op::GEQ, 5));
    CHECK_FALSE(check(4, Op::GEQ, 5));
    CHECK(check(5, Op::LEQ, 5));
    CHECK_FALSE(check(6, Op::LEQ, 5));
    CHECK(check(6, Op::GT, 5));
    CHECK_FALSE(check(5, Op::GT, 5));
    CHECK(check(4, Op::LT, 5));
    CHECK_FALSE(check(5, Op::LT, 5));
    // negatives and large magnitudes
    CHECK(check(-1, Op::GT, -2));
    CHECK(check((std::int64_t)1 << 62, Op::GT, 0));
    CHECK(check(-((std::int64_t)1 << 62), Op::LT, 0));

    CHECK_THROWS_AS(comp_check_plain({"v", AttributeValue::make_string("x")},
                                     range_cond("v", Op::GT, 1), aux),
                    std::invalid_argument);
}

TEST_CASE("time-relative comparison: exactly eighteen years") {
    // date_of_birth <= now - offset means "at least that old"
    Condition adult = range_cond("date_of_birth", Op::LEQ, kEighteenYearsSeconds, true);
    AuxData aux;
    aux.current_timestamp = 1700000000;
    const std::int64_t cutoff = 1700000000 - kEighteenYearsSeconds;

    const auto born_at = [&](std::int64_t t) {
        return comp_check_plain({"date_of_birth", AttributeValue::make_date(t)}, adult, aux);
    };
    CHECK(born_at(cutoff));           // birthday today: old enough
    CHECK(born_at(cutoff - 1));
    CHECK_FALSE(born_at(cutoff + 1));  // one second too young

    // the same person crosses the boundary as the clock advances
    aux.current_timestamp += 1;
    CHECK(comp_check_plain({"date_of_birth", AttributeValue::make_date(cutoff + 1)}, adult,
                           aux));
}

TEST_CASE("membership and non-membership agree with the set") {
    AuxData aux = countries_aux();
    const auto in_eu = member_cond("country", Op::IN, "eu");
    const auto not_eu = member_cond("country", Op::NOTIN, "eu");
    for (const char* name : {"DE", "FR", "IT", "ES", "NL"}) {
        const Attribute a{"country", AttributeValue::make_string(name)};
        CHECK(comp_check_plain(a, in_eu, aux));
        CHECK_FALSE(comp_check_plain(a, not_eu, aux));
    }
    for (const char* name : {"US", "GB", "JP", ""}) {
        const Attribute a{"country", AttributeValue::make_string(name)};
        CHECK_FALSE(comp_check_plain(a, in_eu, aux));
        CHECK(comp_check_plain(a, not_eu, aux));
    }
    CHECK_THROWS_AS(comp_check_plain({"country", AttributeValue::make_string("DE")},
                                     member_cond("country", Op::IN, "missing"), aux),
                    std::runtime_error);
}

// ===== Membership sets =====

TEST_CASE("every member has an inclusion witness and no gap witness") {
    const AuxData aux = countries_aux();
    const MembershipSet& set = aux.sets.at("eu");
    CHECK(set.size() == 5);
    CHECK(set.depth() == 3);
    CHECK(set.in_root() != set.gap_root());

    for (const char* name : {"DE", "FR", "IT", "ES", "NL"}) {
        const auto repr = enc::value_repr(AttributeValue::make_string(name));
        REQUIRE(set.contains(repr));
        const auto idx = set.leaf_index(repr);
        REQUIRE(idx.has_value());
        CHECK(crypto::merkle_path_verify(set.in_root(), repr, set.in_path(*idx)));
        CHECK_FALSE(set.gap_witness(repr).has_value());
    }
}

TEST_CASE("every non-member has exactly one verifying gap witness") {
    const AuxData aux = countries_aux();
    const MembershipSet& set = aux.sets.at("eu");
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto repr =
            enc::value_repr(AttributeValue::make_string("outsider" + std::to_string(rng())));
        if (set.contains(repr)) continue;
        CHECK_FALSE(set.leaf_index(repr).has_value());
        const auto gap = set.gap_witness(repr);
        REQUIRE(gap.has_value());
        // the witness leaf is the hash of the ordered pair and opens to the gap root
        CHECK(crypto::merkle_path_verify(set.gap_root(), gap_pair_leaf(gap->lower, gap->upper),
                                         gap->path));
        // repr falls strictly inside the pair: lower < repr, and repr < upper
        // unless this is the wrap pair (upper <= lower)
        CHECK(std::lexicographical_compare(gap->lower.begin(), gap->lower.end(), repr.begin(),
                                           repr.end()) !=
              std::lexicographical_compare(repr.begin(), repr.end(), gap->lower.begin(),
                                           gap->lower.end()));
    }
}

TEST_CASE("sets are order insensitive and reject bad shapes") {
    const std::vector<AttributeValue> forward = {AttributeValue::make_int(1),
                                                 AttributeValue::make_int(2),
                                                 AttributeValue::make_int(3)};
    std::vector<AttributeValue> backward(forward.rbegin(), forward.rend());
    CHECK(MembershipSet(forward, 2).in_root() == MembershipSet(backward, 2).in_root());
    CHECK(MembershipSet(forward, 2).gap_root() == MembershipSet(backward, 2).gap_root());

    CHECK_THROWS_AS(MembershipSet({}, 2), std::invalid_argument);
    std::vector<AttributeValue> five(5, AttributeValue::make_int(0));
    for (int i = 0; i < 5; ++i) five[i] = AttributeValue::make_int(i);
    CHECK_THROWS_AS(MembershipSet(five, 2), std::invalid_argument);  // capacity 4
    std::vector<AttributeValue> dup = {AttributeValue::make_int(1), AttributeValue::make_int(1)};
    CHECK_THROWS_AS(MembershipSet(dup, 2), std::invalid_argument);
}

TEST_CASE("aux data resolves set references") {
    AuxData aux = countries_aux();
    CHECK(aux.resolve("set:eu").size() == 5);
    CHECK_THROWS_AS((void)aux.resolve("set:unknown"), std::runtime_error);
    CHECK_THROWS_AS((void)aux.resolve("eu"), std::invalid_argument);  // missing prefix
    CHECK(set_name_from_ref("set:eu") == "eu");
}

// ===== Policy conjunction =====

TEST_CASE("policy evaluation is the conjunction over all conditions") {
    const auto issuer = crypto::ds_keygen(bytes_of("issuer"));
    const auto subject = crypto::ds_keygen(bytes_of("subject"));
    identity::CredentialSchema schema;
    schema.schema_id = "kyc";
    schema.attribute_specs = {{"country", enc::ValueKind::String, true},
                              {"age", enc::ValueKind::Integer, true}};

    AuxData aux = countries_aux();
    VprZk vpr;
    vpr.function_id = "f";
    vpr.conditions = {member_cond("country", Op::IN, "eu"), range_cond("age", Op::GEQ, 18)};
    const auto& set = aux.sets.at("eu");
    vpr.aux_roots = {{"eu", set.in_root(), set.gap_root()}};

    // enumerate pass/fail per condition; the policy passes only when all do
    for (bool country_ok : {false, true})
        for (bool age_ok : {false, true}) {
            const auto vc = identity::issue_credential(
                issuer.secret_key, subject.public_key,
                {{"country", AttributeValue::make_string(country_ok ? "DE" : "US")},
                 {"age", AttributeValue::make_int(age_ok ? 18 : 17)}},
                schema);
            CHECK(evaluate_policy_plain(vc, vpr, aux) == (country_ok && age_ok));
        }
}

TEST_CASE("policy evaluation fails on missing claims or broken authenticity") {
    const auto issuer = crypto::ds_keygen(bytes_of("issuer"));
    const auto subject = crypto::ds_keygen(bytes_of("subject"));
    identity::CredentialSchema schema;
    schema.schema_id = "s";
    schema.attribute_specs = {{"age", enc::ValueKind::Integer, true}};
    AuxData aux;
    VprZk vpr;
    vpr.function_id = "f";
    vpr.conditions = {range_cond("age", Op::GEQ, 18)};

    auto vc = identity::issue_credential(issuer.secret_key, subject.public_key,
                                         {{"age", AttributeValue::make_int(30)}}, schema);
    CHECK(evaluate_policy_plain(vc, vpr, aux));

    auto tampered = vc;
    tampered.claims[0].attribute.value = AttributeValue::make_int(31);
    CHECK_FALSE(evaluate_policy_plain(tampered, vpr, aux));

    VprZk other = vpr;
    other.conditions = {range_cond("income", Op::GEQ, 1)};
    CHECK_FALSE(evaluate_policy_plain(vc, other, aux));
}

// ===== Operator and scheme names =====

TEST_CASE("operator and scheme names round trip") {
    for (Op op : {Op::EQ, Op::NEQ, Op::GT, Op::LT, Op::GEQ, Op::LEQ, Op::IN, Op::NOTIN})
        CHECK(op_from_name(op_name(op)) == op);
    CHECK_THROWS_AS(op_from_name("ALMOST"), std::invalid_argument);
    CHECK(scheme_from_name("baseline") == Scheme::Baseline);
    CHECK(scheme_from_name("cp") == Scheme::CommitAndProve);
    CHECK_THROWS_AS(scheme_from_name("hybrid"), std::invalid_argument);
}

TEST_CASE("condition JSON round trips") {
    Condition c = member_cond("country", Op::NOTIN, "sanctioned");
    const Condition back = Condition::from_json(c.to_json());
    CHECK(back.key == c.key);
    CHECK(back.op == c.op);
    CHECK(back.set_ref == c.set_ref);

    Condition t = range_cond("date_of_birth", Op::LEQ, kEighteenYearsSeconds, true);
    const Condition tback = Condition::from_json(t.to_json());
    CHECK(tback.time_relative);
    CHECK(tback.value.num == kEighteenYearsSeconds);
}
