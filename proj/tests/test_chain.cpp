#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <utility>

#include "doctest.h"
#include "zkperm/chain.hpp"

using namespace zkperm;
using namespace zkperm::chain;
using enc::AttributeValue;
using policy::Condition;
using policy::Op;
using policy::Scheme;

namespace {

// ===== Fixture: one KYC-style policy on the direct backend =====

struct World {
    crypto::SignatureKeyPair issuer = crypto::ds_keygen(bytes_of("chain-issuer"));
    crypto::SignatureKeyPair rogue = crypto::ds_keygen(bytes_of("chain-rogue"));
    crypto::SignatureKeyPair subject = crypto::ds_keygen(bytes_of("chain-subject"));
    identity::CredentialSchema schema;
    policy::AuxData aux;
    std::filesystem::path dir;
    identity::Registry registry;
    policy::VprZk vpr;          // country EQ DE + passport NOTIN sanctions, cp scheme
    policy::VprZk vpr_baseline; // same conditions, baseline scheme
    identity::VerifiableCredential vc;

    World()
        : dir(std::filesystem::temp_directory_path() / "zkperm-chain-test"),
          registry((std::filesystem::remove_all(dir), dir / "registry")) {
        schema.schema_id = "kyc";
        schema.attribute_specs = {{"country", enc::ValueKind::String, true},
                                  {"passport", enc::ValueKind::String, true}};
        aux.sets.emplace("sanctions",
                         policy::MembershipSet({AttributeValue::make_string("X1"),
                                                AttributeValue::make_string("X2"),
                                                AttributeValue::make_string("X3")},
                                               3));
        Condition country;
        country.key = "country";
        country.op = Op::EQ;
        country.value = AttributeValue::make_string("DE");
        Condition clean;
        clean.key = "passport";
        clean.op = Op::NOTIN;
        clean.set_ref = "set:sanctions";

        const auto backend = proofsys::make_backend("direct");
        vpr = policy::build_vpr("fn", {country, clean}, Scheme::CommitAndProve, schema, aux,
                                issuer.public_key, *backend, registry, dir / "artifacts");
        vpr_baseline = policy::build_vpr("fn-base", {country, clean}, Scheme::Baseline, schema,
                                         aux, issuer.public_key, *backend, registry,
                                         dir / "artifacts");
        vc = identity::issue_credential(issuer.secret_key, subject.public_key,
                                        {{"country", AttributeValue::make_string("DE")},
                                         {"passport", AttributeValue::make_string("P777")}},
                                        schema);
    }

    GenesisConfig genesis() const {
        GenesisConfig g;
        g.owner = "owner";
        g.chain_seed = bytes_of("chain-test");
        g.balances["user"] = {1000000, 1000000};
        g.balances["whale"] = {50000000, 50000000};
        return g;
    }

    holder::VpZk present(Ledger& ledger, const std::string& account = "user",
                         const policy::VprZk* which = nullptr) const {
        const policy::VprZk& req = which ? *which : vpr;
        const auto backend = proofsys::make_backend("direct");
        const Fr nonce = ledger.request_nonce(account);
        policy::AuxData aux_now = aux;
        aux_now.current_timestamp = ledger.block_timestamp();
        return holder::build_presentation(vc, subject, req, aux_now, nonce, *backend,
                                          dir / "artifacts");
    }
};

World& world() {
    static World w;
    return w;
}

Ledger ready_ledger() {
    World& w = world();
    Ledger ledger(w.genesis());
    REQUIRE(ledger
                .register_policy("owner", "fn", w.vpr, w.issuer.public_key,
                                 {w.issuer.public_key})
                .granted);
    REQUIRE(ledger
                .register_policy("owner", "fn-base", w.vpr_baseline, w.issuer.public_key,
                                 {w.issuer.public_key})
                .granted);
    return ledger;
}

enc::Json deposit_args(std::uint64_t a1, std::uint64_t a2) {
    return enc::Json{{"action", "deposit"}, {"amount1", a1}, {"amount2", a2}};
}

enc::Json swap_args(int token_in, std::uint64_t amount) {
    return enc::Json{{"action", "swap"}, {"tokenIn", token_in}, {"amountIn", amount}};
}

}  // namespace

// ===== Policy registration =====

TEST_CASE("policy registration is owner-only and write-once") {
    World& w = world();
    Ledger ledger(w.genesis());

    const auto not_owner = ledger.register_policy("user", "fn", w.vpr, w.issuer.public_key,
                                                  {w.issuer.public_key});
    CHECK_FALSE(not_owner.granted);
    CHECK(not_owner.code == RevertCode::NotOwner);

    CHECK(ledger.register_policy("owner", "fn", w.vpr, w.issuer.public_key,
                                 {w.issuer.public_key})
              .granted);
    const auto duplicate = ledger.register_policy("owner", "fn", w.vpr, w.issuer.public_key,
                                                  {w.issuer.public_key});
    CHECK_FALSE(duplicate.granted);
    CHECK(duplicate.code == RevertCode::PolicyExists);

    REQUIRE(ledger.find_policy("fn") != nullptr);
    CHECK(ledger.find_policy("fn")->owner == "owner");
    CHECK(ledger.find_policy("missing") == nullptr);
}

// ===== The six-step gate, one coded revert per step =====

TEST_CASE("unknown function reverts without consuming the nonce") {
    World& w = world();
    Ledger ledger = ready_ledger();
    holder::VpZk vp = w.present(ledger);
    vp.function_id = "ghost";
    const auto r = ledger.submit_access("user", "ghost", vp, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::PolicyNotFound);
    // the pending nonce survives a lookup failure: the original submit works
    vp.function_id = "fn";
    CHECK(ledger.submit_access("user", "fn", vp, deposit_args(1000, 1000)).granted);
}

TEST_CASE("wrong, missing, or replayed nonce reverts and burns the pending nonce") {
    World& w = world();
    Ledger ledger = ready_ledger();

    holder::VpZk vp = w.present(ledger);
    holder::VpZk stale = vp;
    stale.nonce = stale.nonce + Fr::one();
    auto r = ledger.submit_access("user", "fn", stale, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::NonceMismatch);
    // the mismatch consumed the pending nonce, so even the honest vp fails now
    r = ledger.submit_access("user", "fn", vp, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::NonceMismatch);

    // no nonce requested at all
    Ledger fresh = ready_ledger();
    r = fresh.submit_access("user", "fn", vp, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::NonceMismatch);

    // straight replay of a granted presentation
    Ledger replay_target = ready_ledger();
    holder::VpZk good = w.present(replay_target);
    REQUIRE(replay_target.submit_access("user", "fn", good, deposit_args(1000, 1000)).granted);
    r = replay_target.submit_access("user", "fn", good, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::NonceMismatch);
}

TEST_CASE("forged or mismatched claim signatures revert as authenticity failures") {
    World& w = world();
    Ledger ledger = ready_ledger();

    holder::VpZk vp = w.present(ledger);
    REQUIRE(vp.claim_signatures.size() == 2);
    holder::VpZk forged = vp;
    forged.claim_signatures[0] =
        crypto::ds_sign_digest(w.rogue.secret_key, forged.claim_hashes[0]);
    auto r = ledger.submit_access("user", "fn", forged, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::AuthenticityFail);

    holder::VpZk missing = w.present(ledger);
    missing.claim_signatures.pop_back();
    r = ledger.submit_access("user", "fn", missing, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::AuthenticityFail);

    holder::VpZk swapped = w.present(ledger);
    std::swap(swapped.claim_signatures[0], swapped.claim_signatures[1]);
    r = ledger.submit_access("user", "fn", swapped, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::AuthenticityFail);
}

TEST_CASE("a policy registered against an untrusted issuer reverts") {
    World& w = world();
    Ledger ledger(w.genesis());
    // allowlist names only the rogue key, so the real issuer is untrusted
    REQUIRE(ledger
                .register_policy("owner", "fn", w.vpr, w.issuer.public_key,
                                 {w.rogue.public_key})
                .granted);
    holder::VpZk vp = w.present(ledger);
    const auto r = ledger.submit_access("user", "fn", vp, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::UntrustedIssuer);
}

TEST_CASE("tampered presentations revert as invalid proofs") {
    World& w = world();
    Ledger ledger = ready_ledger();

    // proof bytes flipped
    holder::VpZk flipped = w.present(ledger);
    flipped.proof[flipped.proof.size() / 2] ^= 1;
    auto r = ledger.submit_access("user", "fn", flipped, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::ProofInvalid);

    // claim hash swapped for a hash the proof does not cover
    holder::VpZk wrong_hash = w.present(ledger);
    wrong_hash.claim_hashes[0][3] ^= 1;
    // signatures must still match to get past the authenticity step
    wrong_hash.claim_signatures[0] =
        crypto::ds_sign_digest(w.issuer.secret_key, wrong_hash.claim_hashes[0]);
    r = ledger.submit_access("user", "fn", wrong_hash, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::ProofInvalid);

    // hash count that does not match the circuit statement
    holder::VpZk extra = w.present(ledger);
    extra.claim_hashes.push_back(extra.claim_hashes[0]);
    extra.claim_signatures.push_back(extra.claim_signatures[0]);
    r = ledger.submit_access("user", "fn", extra, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::ProofInvalid);

    // roots in the vp are transparency data; the chain proves against the
    // registered roots, so lying about them cannot help
    holder::VpZk lied_roots = w.present(ledger);
    if (!lied_roots.roots.empty()) lied_roots.roots[0][0] ^= 1;
    CHECK(ledger.submit_access("user", "fn", lied_roots, deposit_args(1000, 1000)).granted);

    // proof for the baseline circuit offered to the cp policy
    holder::VpZk cross = w.present(ledger, "user", &w.vpr_baseline);
    cross.function_id = "fn";
    cross.claim_signatures = w.vc.claim_signatures;  // cp gate needs them
    r = ledger.submit_access("user", "fn", cross, deposit_args(1000, 1000));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::ProofInvalid);
}

TEST_CASE("baseline policies skip the cache and verify no signatures on chain") {
    World& w = world();
    Ledger ledger = ready_ledger();
    holder::VpZk vp = w.present(ledger, "user", &w.vpr_baseline);
    CHECK(vp.claim_signatures.empty());
    const auto r = ledger.submit_access("user", "fn-base", vp, deposit_args(1000, 1000));
    CHECK(r.granted);
    CHECK(r.cost.signatures == 0);
    CHECK(ledger.cache_size() == 0);
}

// ===== Verified-claim cache =====

TEST_CASE("cache fills on first cp access and spares signatures on the second") {
    World& w = world();
    Ledger ledger = ready_ledger();

    holder::VpZk first = w.present(ledger);
    const auto r1 = ledger.submit_access("user", "fn", first, deposit_args(10000, 10000));
    REQUIRE(r1.granted);
    CHECK(r1.cost.signatures == 2);
    CHECK(ledger.cache_size() == 2);
    for (const auto& h : first.claim_hashes) CHECK(ledger.cache_contains(w.issuer.public_key, h));

    holder::VpZk second = w.present(ledger);
    const auto r2 = ledger.submit_access("user", "fn", second, deposit_args(10000, 10000));
    REQUIRE(r2.granted);
    CHECK(r2.cost.signatures == 0);
    CHECK(r2.cost_units < r1.cost_units);
    CHECK(ledger.cache_size() == 2);  // no duplicates

    // a denied attempt must not stash its claims in the cache
    Ledger fresh = ready_ledger();
    holder::VpZk forged = w.present(fresh);
    forged.proof[forged.proof.size() / 2] ^= 1;
    REQUIRE_FALSE(fresh.submit_access("user", "fn", forged, deposit_args(1, 1)).granted);
    CHECK(fresh.cache_size() == 0);
}

TEST_CASE("cache entries are scoped to the attesting issuer") {
    World& w = world();
    Ledger ledger = ready_ledger();
    holder::VpZk vp = w.present(ledger);
    REQUIRE(ledger.submit_access("user", "fn", vp, deposit_args(1000, 1000)).granted);
    CHECK(ledger.cache_contains(w.issuer.public_key, vp.claim_hashes[0]));
    CHECK_FALSE(ledger.cache_contains(w.rogue.public_key, vp.claim_hashes[0]));
}

// ===== Pool behavior and atomicity =====

TEST_CASE("the product invariant holds across deposits and swaps") {
    World& w = world();
    Ledger ledger = ready_ledger();

    holder::VpZk vp = w.present(ledger, "whale");
    REQUIRE(ledger.submit_access("whale", "fn", vp, deposit_args(1000000, 4000000)).granted);
    CHECK(ledger.pool().reserve1 == 1000000);
    CHECK(ledger.pool().reserve2 == 4000000);
    CHECK(ledger.pool().total_shares == 2000000);  // isqrt(1e6 * 4e6)

    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i) {
        const unsigned __int128 before = (unsigned __int128)ledger.pool().reserve1 *
                                         ledger.pool().reserve2;
        holder::VpZk swap_vp = w.present(ledger, "user");
        const std::uint64_t amount = 1 + rng() % 5000;
        const auto r = ledger.submit_access("user", "fn", swap_vp,
                                            swap_args(1 + (int)(i % 2), amount));
        REQUIRE(r.granted);
        const unsigned __int128 after = (unsigned __int128)ledger.pool().reserve1 *
                                        ledger.pool().reserve2;
        CHECK(after >= before);  // rounding always favors the pool
    }
}

TEST_CASE("balances move only when the pool call succeeds") {
    World& w = world();
    Ledger ledger = ready_ledger();
    const auto before_user = ledger.balance_of("user");

    // granted proof, but the deposit amount exceeds the balance
    holder::VpZk vp = w.present(ledger);
    const auto r = ledger.submit_access("user", "fn", vp, deposit_args(5000000, 1));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::CallFailed);
    CHECK(ledger.balance_of("user").token1 == before_user.token1);
    CHECK(ledger.balance_of("user").token2 == before_user.token2);
    CHECK(ledger.pool().reserve1 == 0);
    // the failed call still consumed the nonce and left the cache empty
    CHECK(ledger.cache_size() == 0);

    // malformed call arguments
    holder::VpZk vp2 = w.present(ledger);
    const auto r2 = ledger.submit_access("user", "fn", vp2, enc::Json{{"action", "steal"}});
    CHECK_FALSE(r2.granted);
    CHECK(r2.code == RevertCode::CallFailed);

    // a successful deposit then moves exactly the stated amounts
    holder::VpZk vp3 = w.present(ledger);
    REQUIRE(ledger.submit_access("user", "fn", vp3, deposit_args(2000, 8000)).granted);
    CHECK(ledger.balance_of("user").token1 == before_user.token1 - 2000);
    CHECK(ledger.balance_of("user").token2 == before_user.token2 - 8000);
}

TEST_CASE("timestamped policies pin the presentation to the current block") {
    World& w = world();
    // age policy: date_of_birth at least 18 years back
    identity::CredentialSchema schema;
    schema.schema_id = "dob";
    schema.attribute_specs = {{"date_of_birth", enc::ValueKind::Date, true}};
    Condition adult;
    adult.key = "date_of_birth";
    adult.op = Op::LEQ;
    adult.value = AttributeValue::make_int(policy::kEighteenYearsSeconds);
    adult.time_relative = true;
    const auto backend = proofsys::make_backend("direct");
    identity::Registry reg(w.dir / "registry-ts");
    policy::AuxData no_sets;
    const auto vpr_ts = policy::build_vpr("aged", {adult}, Scheme::CommitAndProve, schema,
                                          no_sets, w.issuer.public_key, *backend, reg,
                                          w.dir / "artifacts-ts");
    REQUIRE(vpr_ts.uses_timestamp);

    GenesisConfig g = w.genesis();
    Ledger ledger(g);
    REQUIRE(ledger
                .register_policy("owner", "aged", vpr_ts, w.issuer.public_key,
                                 {w.issuer.public_key})
                .granted);
    const std::int64_t dob = g.genesis_timestamp - policy::kEighteenYearsSeconds - 5;
    const auto vc = identity::issue_credential(w.issuer.secret_key, w.subject.public_key,
                                               {{"date_of_birth", AttributeValue::make_date(dob)}},
                                               schema);

    policy::AuxData aux_now;
    aux_now.current_timestamp = ledger.block_timestamp();
    const Fr n1 = ledger.request_nonce("user");
    const auto vp = holder::build_presentation(vc, w.subject, vpr_ts, aux_now, n1, *backend,
                                               w.dir / "artifacts-ts");
    CHECK(vp.timestamp == ledger.block_timestamp());
    REQUIRE(ledger.submit_access("user", "aged", vp, deposit_args(100, 100)).granted);

    // a presentation from the (now) previous block reverts at the time gate
    const Fr n2 = ledger.request_nonce("user");
    const auto stale = holder::build_presentation(vc, w.subject, vpr_ts, aux_now, n2, *backend,
                                                  w.dir / "artifacts-ts");
    ledger.advance_block(3600);
    const auto r = ledger.submit_access("user", "aged", stale, deposit_args(100, 100));
    CHECK_FALSE(r.granted);
    CHECK(r.code == RevertCode::TimestampMismatch);
}

TEST_CASE("block advancement moves height and time forward only") {
    World& w = world();
    Ledger ledger(w.genesis());
    const auto h = ledger.block_height();
    const auto t = ledger.block_timestamp();
    ledger.advance_block(60);
    CHECK(ledger.block_height() == h + 1);
    CHECK(ledger.block_timestamp() == t + 60);
    CHECK_THROWS_AS(ledger.advance_block(0), std::invalid_argument);
    CHECK_THROWS_AS(ledger.advance_block(-5), std::invalid_argument);
}

// ===== Determinism and replay =====

TEST_CASE("fifty mixed transactions replay to a bit-identical state, ten times") {
    World& w = world();
    Ledger ledger = ready_ledger();

    std::mt19937_64 rng(2024);
    int submitted = 0;
    while (submitted < 50) {
        const int kind = (int)(rng() % 5);
        if (kind == 0) {
            ledger.advance_block(1 + (std::int64_t)(rng() % 600));
            ++submitted;
        } else if (kind == 1) {
            (void)ledger.request_nonce(rng() % 2 ? "user" : "whale");
            ++submitted;
        } else {
            const std::string account = rng() % 2 ? "user" : "whale";
            holder::VpZk vp = w.present(ledger, account);
            if (rng() % 4 == 0) vp.proof[rng() % vp.proof.size()] ^= 1;  // some denials
            enc::Json args = ledger.pool().total_shares == 0 || rng() % 2
                                 ? deposit_args(100 + rng() % 3000, 100 + rng() % 3000)
                                 : swap_args(1 + (int)(rng() % 2), 1 + rng() % 500);
            (void)ledger.submit_access(account, "fn", vp, args);
            ++submitted;
        }
    }
    REQUIRE(ledger.log().size() >= 50);

    const auto want = ledger.state_digest();
    for (int run = 0; run < 10; ++run) {
        Ledger rebuilt = Ledger::replay(w.genesis(), ledger.log());
        CHECK(rebuilt.state_digest() == want);
        CHECK(rebuilt.log().size() == ledger.log().size());
        CHECK(rebuilt.block_height() == ledger.block_height());
        CHECK(rebuilt.cache_size() == ledger.cache_size());
    }
}

TEST_CASE("replay rejects unknown record types") {
    World& w = world();
    CHECK_THROWS_AS(Ledger::replay(w.genesis(), {enc::Json{{"type", "mint_money"}}}),
                    std::invalid_argument);
}

TEST_CASE("receipts accumulate in submission order with block heights") {
    World& w = world();
    Ledger ledger = ready_ledger();
    holder::VpZk vp = w.present(ledger);
    (void)ledger.submit_access("user", "fn", vp, deposit_args(1000, 1000));
    ledger.advance_block(10);
    holder::VpZk vp2 = w.present(ledger);
    (void)ledger.submit_access("user", "fn", vp2, deposit_args(1000, 1000));
    const auto& rs = ledger.receipts();
    // two registrations from the fixture plus the two submissions
    REQUIRE(rs.size() == 4);
    CHECK(rs[2].block_height + 1 == rs[3].block_height);
    CHECK(rs[3].granted);
}

TEST_CASE("the cost model prices the receipt") {
    World& w = world();
    GenesisConfig g = w.genesis();
    g.cost_model.signature = 7777;
    Ledger ledger(g);
    REQUIRE(ledger
                .register_policy("owner", "fn", w.vpr, w.issuer.public_key,
                                 {w.issuer.public_key})
                .granted);
    holder::VpZk vp = w.present(ledger);
    const auto r = ledger.submit_access("user", "fn", vp, deposit_args(1000, 1000));
    REQUIRE(r.granted);
    CHECK(r.cost.signatures == 2);
    CHECK(r.cost_units == r.cost.total(g.cost_model));
    CHECK(r.cost_units >= 2 * 7777);
}
