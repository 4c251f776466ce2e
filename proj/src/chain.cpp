#include "zkperm/chain.hpp"

#include <algorithm>

#include "zkperm/policy_circuit.hpp"

namespace zkperm {
namespace chain {

using policy::Op;

// ===== Cost model =====

enc::Json CostModel::to_json() const {
    return enc::Json{{"pairing", pairing},
                     {"signature", signature},
                     {"hash", hash},
                     {"storageWrite", storage_write},
                     {"publicInputTerm", public_input_term}};
}

CostModel CostModel::from_json(const enc::Json& j) {
    CostModel m;
    m.pairing = j.at("pairing").get<std::uint64_t>();
    m.signature = j.at("signature").get<std::uint64_t>();
    m.hash = j.at("hash").get<std::uint64_t>();
    m.storage_write = j.at("storageWrite").get<std::uint64_t>();
    m.public_input_term = j.at("publicInputTerm").get<std::uint64_t>();
    return m;
}

std::uint64_t CostBreakdown::total(const CostModel& m) const {
    return pairings * m.pairing + signatures * m.signature + hashes * m.hash +
           storage_writes * m.storage_write + public_input_terms * m.public_input_term;
}

enc::Json CostBreakdown::to_json() const {
    return enc::Json{{"pairings", pairings},
                     {"signatures", signatures},
                     {"hashes", hashes},
                     {"storageWrites", storage_writes},
                     {"publicInputTerms", public_input_terms}};
}

// ===== Receipts =====

std::string revert_code_name(RevertCode code) {
    switch (code) {
        case RevertCode::None: return "OK";
        case RevertCode::NonceMismatch: return "NONCE_MISMATCH";
        case RevertCode::AuthenticityFail: return "AUTHENTICITY_FAIL";
        case RevertCode::UntrustedIssuer: return "UNTRUSTED_ISSUER";
        case RevertCode::ProofInvalid: return "PROOF_INVALID";
        case RevertCode::TimestampMismatch: return "TIMESTAMP_MISMATCH";
        case RevertCode::PolicyNotFound: return "POLICY_NOT_FOUND";
        case RevertCode::NotOwner: return "NOT_OWNER";
        case RevertCode::PolicyExists: return "POLICY_EXISTS";
        case RevertCode::CallFailed: return "CALL_FAILED";
    }
    return "UNKNOWN";
}

enc::Json Receipt::to_json() const {
    return enc::Json{{"granted", granted},
                     {"code", revert_code_name(code)},
                     {"cost", cost.to_json()},
                     {"costUnits", cost_units},
                     {"blockHeight", block_height},
                     {"detail", detail},
                     {"result", result}};
}

// ===== Genesis =====

namespace {

enc::Json balance_json(const TokenBalance& b) {
    return enc::Json{{"token1", b.token1}, {"token2", b.token2}};
}

TokenBalance balance_from_json(const enc::Json& j) {
    return TokenBalance{j.at("token1").get<std::uint64_t>(), j.at("token2").get<std::uint64_t>()};
}

std::string point_hex(const ec::EdPoint& p) { return to_hex(crypto::public_key_to_bytes(p)); }

ec::EdPoint point_from_hex(const std::string& s) {
    return crypto::public_key_from_bytes(from_hex(s));
}

std::string cache_key(const ec::EdPoint& issuer, const crypto::HashDigest& claim_hash) {
    return point_hex(issuer) + ":" + crypto::digest_hex(claim_hash);
}

std::uint64_t integer_sqrt(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 n = (unsigned __int128)a * b;
    if (n == 0) return 0;
    unsigned __int128 x = n, y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return (std::uint64_t)x;
}

}  // namespace

enc::Json GenesisConfig::to_json() const {
    enc::Json balances_json = enc::Json::object();
    for (const auto& [addr, bal] : balances) balances_json[addr] = balance_json(bal);
    return enc::Json{{"owner", owner},
                     {"chainSeed", to_hex(chain_seed)},
                     {"genesisTimestamp", genesis_timestamp},
                     {"costModel", cost_model.to_json()},
                     {"balances", balances_json}};
}

GenesisConfig GenesisConfig::from_json(const enc::Json& j) {
    GenesisConfig g;
    g.owner = j.at("owner").get<std::string>();
    g.chain_seed = from_hex(j.at("chainSeed").get<std::string>());
    g.genesis_timestamp = j.at("genesisTimestamp").get<std::int64_t>();
    g.cost_model = CostModel::from_json(j.at("costModel"));
    for (const auto& [addr, bal] : j.at("balances").items())
        g.balances[addr] = balance_from_json(bal);
    return g;
}

// ===== Ledger =====

Ledger::Ledger(GenesisConfig config) : config_(std::move(config)) {
    block_height_ = 1;
    block_timestamp_ = config_.genesis_timestamp;
    accounts_ = config_.balances;
}

Fr Ledger::draw_nonce() {
    Bytes material = bytes_of("nonce");
    append(material, config_.chain_seed);
    std::uint8_t ctr[8];
    store_be64(ctr, nonce_counter_++);
    append(material, ctr, 8);
    const crypto::HashDigest d = crypto::sha256(material);
    return ff::field_from_bytes_reduce<Fr>(d.data());
}

Fr Ledger::request_nonce(const std::string& account) {
    enc::Json record{{"type", "request_nonce"}, {"account", account}};
    apply_record(record);
    log_.push_back(std::move(record));
    return pending_nonces_.at(account);
}

Receipt Ledger::register_policy(const std::string& caller, const std::string& function_id,
                                const policy::VprZk& vpr, const ec::EdPoint& issuer_public_key,
                                const std::vector<ec::EdPoint>& trusted_issuers) {
    enc::Json trusted = enc::Json::array();
    for (const auto& pk : trusted_issuers) trusted.push_back(point_hex(pk));
    enc::Json record{{"type", "register_policy"},
                     {"caller", caller},
                     {"functionId", function_id},
                     {"vpr", vpr.to_json()},
                     {"issuerKey", point_hex(issuer_public_key)},
                     {"trustedIssuers", trusted}};
    apply_record(record);
    log_.push_back(std::move(record));
    return receipts_.back();
}

Receipt Ledger::submit_access(const std::string& caller, const std::string& function_id,
                              const holder::VpZk& vp, const enc::Json& call_args) {
    enc::Json record{{"type", "submit_access"},
                     {"caller", caller},
                     {"functionId", function_id},
                     {"vp", vp.to_json()},
                     {"callArgs", call_args}};
    apply_record(record);
    log_.push_back(std::move(record));
    return receipts_.back();
}

void Ledger::advance_block(std::int64_t seconds) {
    if (seconds < 1) throw std::invalid_argument("block time must advance by at least one second");
    enc::Json record{{"type", "advance_block"}, {"seconds", seconds}};
    apply_record(record);
    log_.push_back(std::move(record));
}

void Ledger::apply_record(const enc::Json& record) {
    const std::string type = record.at("type").get<std::string>();
    if (type == "request_nonce") {
        pending_nonces_[record.at("account").get<std::string>()] = draw_nonce();
    } else if (type == "register_policy") {
        do_register(record);
    } else if (type == "submit_access") {
        do_submit(record);
    } else if (type == "advance_block") {
        block_height_ += 1;
        block_timestamp_ += record.at("seconds").get<std::int64_t>();
    } else {
        throw std::invalid_argument("unknown transaction type: " + type);
    }
}

Receipt& Ledger::do_register(const enc::Json& record) {
    receipts_.emplace_back();
    Receipt& receipt = receipts_.back();
    receipt.block_height = block_height_;

    const std::string caller = record.at("caller").get<std::string>();
    const std::string function_id = record.at("functionId").get<std::string>();

    const auto fail = [&](RevertCode code, const std::string& detail) -> Receipt& {
        receipt.code = code;
        receipt.detail = detail;
        receipt.cost_units = receipt.cost.total(config_.cost_model);
        return receipt;
    };

    if (caller != config_.owner) return fail(RevertCode::NotOwner, "caller is not the owner");
    if (policies_.count(function_id) != 0)
        return fail(RevertCode::PolicyExists, "policy already registered for " + function_id);

    PolicyEntry entry;
    entry.vpr = policy::VprZk::from_json(record.at("vpr"));
    entry.issuer_public_key = point_from_hex(record.at("issuerKey").get<std::string>());
    for (const auto& pk : record.at("trustedIssuers"))
        entry.trusted_issuers.push_back(point_from_hex(pk.get<std::string>()));
    entry.owner = caller;

    if (entry.vpr.function_id != function_id)
        return fail(RevertCode::CallFailed, "request record names a different function id");
    std::size_t memberships = 0;
    for (const auto& c : entry.vpr.conditions)
        if (policy::op_is_membership(c.op)) ++memberships;
    if (entry.vpr.aux_roots.size() != memberships)
        return fail(RevertCode::CallFailed, "auxiliary roots do not cover the membership conditions");

    policies_.emplace(function_id, std::move(entry));
    receipt.granted = true;
    receipt.cost.storage_writes = 1;
    receipt.cost_units = receipt.cost.total(config_.cost_model);
    receipt.detail = "policy registered";
    return receipt;
}

Receipt& Ledger::do_submit(const enc::Json& record) {
    receipts_.emplace_back();
    Receipt& receipt = receipts_.back();
    receipt.block_height = block_height_;

    const std::string caller = record.at("caller").get<std::string>();
    const std::string function_id = record.at("functionId").get<std::string>();
    const holder::VpZk vp = holder::VpZk::from_json(record.at("vp"));
    const enc::Json& call_args = record.at("callArgs");

    const auto fail = [&](RevertCode code, const std::string& detail) -> Receipt& {
        receipt.code = code;
        receipt.detail = detail;
        receipt.cost_units = receipt.cost.total(config_.cost_model);
        return receipt;
    };

    const auto policy_it = policies_.find(function_id);
    if (policy_it == policies_.end())
        return fail(RevertCode::PolicyNotFound, "no policy for " + function_id);
    const PolicyEntry& entry = policy_it->second;

    // (1) challenge freshness; the pending nonce is consumed either way so a
    // rejected proof cannot be reworked against the same challenge
    {
        const auto nonce_it = pending_nonces_.find(caller);
        const bool fresh = nonce_it != pending_nonces_.end() && nonce_it->second == vp.nonce;
        if (nonce_it != pending_nonces_.end()) {
            pending_nonces_.erase(nonce_it);
            receipt.cost.storage_writes += 1;
        }
        if (!fresh) return fail(RevertCode::NonceMismatch, "stale or unknown nonce");
    }

    // (2) claim authenticity, commit-and-prove only: the chain checks the
    // issuer signatures itself, consulting the verified-claim cache first
    std::vector<std::string> staged_cache;
    if (entry.vpr.scheme == policy::Scheme::CommitAndProve) {
        if (vp.claim_signatures.size() != vp.claim_hashes.size())
            return fail(RevertCode::AuthenticityFail,
                        "claim signature count does not match claim hashes");
        for (std::size_t i = 0; i < vp.claim_hashes.size(); ++i) {
            const std::string key = cache_key(entry.issuer_public_key, vp.claim_hashes[i]);
            if (verified_claims_.count(key) != 0) continue;
            receipt.cost.signatures += 1;
            if (!crypto::ds_verify_digest(entry.issuer_public_key, vp.claim_signatures[i],
                                          vp.claim_hashes[i]))
                return fail(RevertCode::AuthenticityFail, "issuer signature rejected");
            staged_cache.push_back(key);
        }
    }

    // (3) the policy's attestation authority must be on the allowlist
    if (std::find(entry.trusted_issuers.begin(), entry.trusted_issuers.end(),
                  entry.issuer_public_key) == entry.trusted_issuers.end())
        return fail(RevertCode::UntrustedIssuer, "issuer is not trusted");

    // (4) proof check against the statement the chain assembles itself:
    // nonce from its table, claim hashes from the presentation, roots from
    // the registered policy, timestamp from the presentation (checked next)
    circuit::CircuitSpec spec;
    spec.conditions = entry.vpr.conditions;
    spec.scheme = entry.vpr.scheme;
    spec.merkle_depth = entry.vpr.merkle_depth;
    spec.issuer_public_key = entry.issuer_public_key;

    if (vp.claim_hashes.size() != circuit::claim_keys(spec).size())
        return fail(RevertCode::ProofInvalid, "claim hash count does not match the policy");

    std::vector<crypto::HashDigest> roots;
    std::size_t membership_index = 0;
    for (const auto& cond : spec.conditions) {
        if (!policy::op_is_membership(cond.op)) continue;
        const auto& aux = entry.vpr.aux_roots.at(membership_index++);
        roots.push_back(cond.op == Op::IN ? aux.in_root : aux.gap_root);
    }

    const std::vector<Fr> public_input = circuit::assemble_public_input(
        spec, vp.nonce, vp.claim_hashes, roots, vp.timestamp);

    const auto backend_id = proofsys::vk_backend(entry.vpr.verification_key);
    if (backend_id == proofsys::BackendId::Succinct)
        receipt.cost.pairings += 3;
    else
        receipt.cost.hashes += 1;
    receipt.cost.public_input_terms += public_input.size();

    if (!proofsys::zk_verify(entry.vpr.verification_key, public_input, vp.proof))
        return fail(RevertCode::ProofInvalid, "proof rejected");

    // (5) time-relative policies must be proven against the current block
    if (entry.vpr.uses_timestamp && vp.timestamp != block_timestamp_)
        return fail(RevertCode::TimestampMismatch, "presentation pinned to a different block time");

    // (6) the gated pool call; pool and balance state commit only on success
    TokenBalance balance = balance_of(caller);
    PoolState pool = pool_;
    enc::Json result;
    const std::string action = call_args.value("action", "");
    if (action == "deposit") {
        const std::uint64_t a1 = call_args.at("amount1").get<std::uint64_t>();
        const std::uint64_t a2 = call_args.at("amount2").get<std::uint64_t>();
        if (a1 == 0 || a2 == 0) return fail(RevertCode::CallFailed, "deposit amounts must be positive");
        if (balance.token1 < a1 || balance.token2 < a2)
            return fail(RevertCode::CallFailed, "insufficient balance");
        std::uint64_t minted;
        if (pool.total_shares == 0) {
            minted = integer_sqrt(a1, a2);
        } else {
            const unsigned __int128 by1 = (unsigned __int128)a1 * pool.total_shares / pool.reserve1;
            const unsigned __int128 by2 = (unsigned __int128)a2 * pool.total_shares / pool.reserve2;
            minted = (std::uint64_t)std::min(by1, by2);
        }
        if (minted == 0) return fail(RevertCode::CallFailed, "deposit too small to mint shares");
        balance.token1 -= a1;
        balance.token2 -= a2;
        pool.reserve1 += a1;
        pool.reserve2 += a2;
        pool.total_shares += minted;
        pool.shares[caller] += minted;
        result = enc::Json{{"sharesMinted", minted}};
    } else if (action == "swap") {
        const int token_in = call_args.at("tokenIn").get<int>();
        const std::uint64_t amount_in = call_args.at("amountIn").get<std::uint64_t>();
        if (token_in != 1 && token_in != 2) return fail(RevertCode::CallFailed, "unknown token");
        if (amount_in == 0) return fail(RevertCode::CallFailed, "swap input must be positive");
        if (pool.reserve1 == 0 || pool.reserve2 == 0)
            return fail(RevertCode::CallFailed, "pool has no liquidity");
        std::uint64_t& bal_in = token_in == 1 ? balance.token1 : balance.token2;
        std::uint64_t& bal_out = token_in == 1 ? balance.token2 : balance.token1;
        std::uint64_t& res_in = token_in == 1 ? pool.reserve1 : pool.reserve2;
        std::uint64_t& res_out = token_in == 1 ? pool.reserve2 : pool.reserve1;
        if (bal_in < amount_in) return fail(RevertCode::CallFailed, "insufficient balance");
        const std::uint64_t out =
            (std::uint64_t)((unsigned __int128)res_out * amount_in / (res_in + amount_in));
        if (out == 0) return fail(RevertCode::CallFailed, "swap output rounds to zero");
        bal_in -= amount_in;
        bal_out += out;
        res_in += amount_in;
        res_out -= out;
        result = enc::Json{{"amountOut", out}};
    } else {
        return fail(RevertCode::CallFailed, "unknown pool action");
    }

    // commit
    for (const std::string& key : staged_cache) {
        verified_claims_.insert(key);
        receipt.cost.storage_writes += 1;
    }
    accounts_[caller] = balance;
    pool_ = std::move(pool);
    receipt.cost.storage_writes += 1;
    receipt.granted = true;
    receipt.detail = "access granted";
    receipt.result = std::move(result);
    receipt.cost_units = receipt.cost.total(config_.cost_model);
    return receipt;
}

TokenBalance Ledger::balance_of(const std::string& account) const {
    const auto it = accounts_.find(account);
    return it == accounts_.end() ? TokenBalance{} : it->second;
}

const PolicyEntry* Ledger::find_policy(const std::string& function_id) const {
    const auto it = policies_.find(function_id);
    return it == policies_.end() ? nullptr : &it->second;
}

bool Ledger::cache_contains(const ec::EdPoint& issuer, const crypto::HashDigest& claim_hash) const {
    return verified_claims_.count(cache_key(issuer, claim_hash)) != 0;
}

crypto::HashDigest Ledger::state_digest() const {
    enc::Json accounts_json = enc::Json::object();
    for (const auto& [addr, bal] : accounts_) accounts_json[addr] = balance_json(bal);

    enc::Json nonces_json = enc::Json::object();
    for (const auto& [addr, nonce] : pending_nonces_) {
        std::uint8_t buf[32];
        ff::field_to_bytes(nonce, buf);
        nonces_json[addr] = to_hex(buf, 32);
    }

    enc::Json policies_json = enc::Json::object();
    for (const auto& [fid, entry] : policies_) {
        enc::Json trusted = enc::Json::array();
        for (const auto& pk : entry.trusted_issuers) trusted.push_back(point_hex(pk));
        policies_json[fid] = enc::Json{{"vpr", entry.vpr.to_json()},
                                       {"issuerKey", point_hex(entry.issuer_public_key)},
                                       {"trustedIssuers", trusted},
                                       {"owner", entry.owner}};
    }

    enc::Json cache_json = enc::Json::array();
    for (const auto& key : verified_claims_) cache_json.push_back(key);

    enc::Json shares_json = enc::Json::object();
    for (const auto& [addr, s] : pool_.shares) shares_json[addr] = s;

    enc::Json receipts_json = enc::Json::array();
    for (const auto& r : receipts_) receipts_json.push_back(r.to_json());

    const enc::Json state{{"blockHeight", block_height_},
                          {"blockTimestamp", block_timestamp_},
                          {"nonceCounter", nonce_counter_},
                          {"accounts", accounts_json},
                          {"nonces", nonces_json},
                          {"policies", policies_json},
                          {"cache", cache_json},
                          {"pool", enc::Json{{"reserve1", pool_.reserve1},
                                             {"reserve2", pool_.reserve2},
                                             {"totalShares", pool_.total_shares},
                                             {"shares", shares_json}}},
                          {"receipts", receipts_json}};
    return enc::canonical_digest(state);
}

Ledger Ledger::replay(const GenesisConfig& config, const std::vector<enc::Json>& records) {
    Ledger ledger(config);
    for (const auto& record : records) {
        ledger.apply_record(record);
        ledger.log_.push_back(record);
    }
    return ledger;
}

}  // namespace chain
}  // namespace zkperm
