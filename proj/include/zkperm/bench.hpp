#pragma once

#include <iosfwd>

#include "zkperm/chain.hpp"

namespace zkperm {
namespace bench {

// ===== Benchmark harness =====
//
// One cell per (proof type, scheme, condition count): synthesize a policy of
// n same-shaped conditions and a compliant credential, compile, set up,
// prove, and push one access through a fresh ledger. Timings are medians
// over the configured repetitions on a monotonic clock.

struct BenchRecord {
    std::string proof_type;  // equal | range | member
    std::string scheme;      // baseline | cp
    unsigned condition_count = 0;
    double witness_time_s = 0;
    double setup_time_s = 0;
    double prove_time_s = 0;
    std::uint64_t compiled_size_bytes = 0;
    std::uint64_t pk_size_bytes = 0;
    std::uint64_t vk_size_bytes = 0;
    std::uint64_t verify_cost_units = 0;
    std::uint64_t constraint_count = 0;
    unsigned repetitions = 1;
};

struct BenchOptions {
    std::vector<std::string> proof_types = {"equal", "range", "member"};
    std::vector<policy::Scheme> schemes = {policy::Scheme::Baseline,
                                           policy::Scheme::CommitAndProve};
    std::vector<unsigned> condition_counts = {1, 2, 4, 8, 16};
    unsigned repetitions = 1;
    std::string backend = "groth16";
    std::filesystem::path work_dir = "bench-work";
    Bytes seed = bytes_of("bench");
    bool keep_proving_keys = false;  // proving keys can run to gigabytes
    std::ostream* progress = nullptr;
};

std::vector<BenchRecord> run_bench(const BenchOptions& options);

void write_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path);
std::vector<BenchRecord> read_csv(const std::filesystem::path& path);

// reduction tables per condition count, linearity diagnostics, and the
// vk-size scheme comparison
std::string render_report(const std::vector<BenchRecord>& records);

}  // namespace bench
}  // namespace zkperm
