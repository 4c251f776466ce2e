#pragma once

#include <map>
#include <set>

#include "zkperm/holder.hpp"
#include "zkperm/policy.hpp"
#include "zkperm/proofsys.hpp"

namespace zkperm {
namespace chain {

using ff::Fr;

// ===== Cost metering =====
//
// Abstract operation counters with configurable weights. The defaults are
// arbitrary units chosen for trend comparison between schemes; they make no
// claim of matching any production gas schedule.

struct CostModel {
    std::uint64_t pairing = 45000;
    std::uint64_t signature = 5000;
    std::uint64_t hash = 60;
    std::uint64_t storage_write = 20000;
    std::uint64_t public_input_term = 6000;

    enc::Json to_json() const;
    static CostModel from_json(const enc::Json& j);
};

struct CostBreakdown {
    std::uint64_t pairings = 0;
    std::uint64_t signatures = 0;
    std::uint64_t hashes = 0;
    std::uint64_t storage_writes = 0;
    std::uint64_t public_input_terms = 0;

    std::uint64_t total(const CostModel& m) const;
    enc::Json to_json() const;
};

// ===== Receipts =====

enum class RevertCode : std::uint8_t {
    None = 0,
    NonceMismatch,
    AuthenticityFail,
    UntrustedIssuer,
    ProofInvalid,
    TimestampMismatch,
    PolicyNotFound,
    NotOwner,
    PolicyExists,
    CallFailed,
};

std::string revert_code_name(RevertCode code);

struct Receipt {
    bool granted = false;
    RevertCode code = RevertCode::None;
    CostBreakdown cost;
    std::uint64_t cost_units = 0;
    std::uint64_t block_height = 0;
    std::string detail;
    enc::Json result;  // pool-call output on success

    enc::Json to_json() const;
};

// ===== Ledger =====

struct TokenBalance {
    std::uint64_t token1 = 0;
    std::uint64_t token2 = 0;
};

struct PoolState {
    std::uint64_t reserve1 = 0;
    std::uint64_t reserve2 = 0;
    std::uint64_t total_shares = 0;
    std::map<std::string, std::uint64_t> shares;
};

struct GenesisConfig {
    std::string owner = "owner";
    Bytes chain_seed = bytes_of("genesis");
    std::int64_t genesis_timestamp = 1700000000;
    CostModel cost_model;
    std::map<std::string, TokenBalance> balances;

    enc::Json to_json() const;
    static GenesisConfig from_json(const enc::Json& j);
};

struct PolicyEntry {
    policy::VprZk vpr;
    ec::EdPoint issuer_public_key;
    std::vector<ec::EdPoint> trusted_issuers;
    std::string owner;
};

// Deterministic single-node ledger. Every mutation flows through a canonical
// JSON transaction record that is appended to the log; replaying the log
// against the same genesis reproduces the state digest bit-exactly.
class Ledger {
  public:
    explicit Ledger(GenesisConfig config);

    const GenesisConfig& config() const { return config_; }
    std::uint64_t block_height() const { return block_height_; }
    std::int64_t block_timestamp() const { return block_timestamp_; }

    // fresh challenge for the account's next access attempt; overwrites any
    // pending one
    Fr request_nonce(const std::string& account);

    // owner-only, write-once per function id. issuer_public_key is the
    // attestation authority the policy was built against.
    Receipt register_policy(const std::string& caller, const std::string& function_id,
                            const policy::VprZk& vpr, const ec::EdPoint& issuer_public_key,
                            const std::vector<ec::EdPoint>& trusted_issuers);

    // the permissioning gate followed by the pool call; coded revert on any
    // failure. The pending nonce is consumed even when access is denied.
    Receipt submit_access(const std::string& caller, const std::string& function_id,
                          const holder::VpZk& vp, const enc::Json& call_args);

    void advance_block(std::int64_t seconds);

    TokenBalance balance_of(const std::string& account) const;
    const PoolState& pool() const { return pool_; }
    const std::vector<Receipt>& receipts() const { return receipts_; }
    const PolicyEntry* find_policy(const std::string& function_id) const;
    std::size_t cache_size() const { return verified_claims_.size(); }
    bool cache_contains(const ec::EdPoint& issuer, const crypto::HashDigest& claim_hash) const;

    const std::vector<enc::Json>& log() const { return log_; }
    crypto::HashDigest state_digest() const;

    // rebuild a ledger by applying recorded transactions to a fresh genesis
    static Ledger replay(const GenesisConfig& config, const std::vector<enc::Json>& records);

  private:
    void apply_record(const enc::Json& record);
    Receipt& do_register(const enc::Json& record);
    Receipt& do_submit(const enc::Json& record);
    Fr draw_nonce();

    GenesisConfig config_;
    std::uint64_t block_height_ = 0;
    std::int64_t block_timestamp_ = 0;
    std::uint64_t nonce_counter_ = 0;
    std::map<std::string, TokenBalance> accounts_;
    std::map<std::string, Fr> pending_nonces_;
    std::map<std::string, PolicyEntry> policies_;
    std::set<std::string> verified_claims_;  // hex(issuer) ':' hex(claim hash)
    PoolState pool_;
    std::vector<Receipt> receipts_;
    std::vector<enc::Json> log_;
};

}  // namespace chain
}  // namespace zkperm
