#include "zkperm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "zkperm/policy_circuit.hpp"

namespace zkperm {
namespace bench {

using policy::Condition;
using policy::Op;
using policy::Scheme;

namespace {

// ===== Synthetic workloads =====

struct CellFixture {
    circuit::CircuitSpec spec;
    crypto::SignatureKeyPair issuer;
    crypto::SignatureKeyPair subject;
    identity::VerifiableCredential vc;
    policy::AuxData aux;
    std::vector<policy::AuxRootEntry> aux_roots;
};

CellFixture make_fixture(const std::string& type, Scheme scheme, unsigned n, const Bytes& seed) {
    CellFixture fx;
    Bytes issuer_seed = seed;
    append(issuer_seed, bytes_of("/issuer"));
    Bytes subject_seed = seed;
    append(subject_seed, bytes_of("/subject"));
    fx.issuer = crypto::ds_keygen(issuer_seed);
    fx.subject = crypto::ds_keygen(subject_seed);

    identity::CredentialSchema schema;
    schema.schema_id = "bench-schema";
    std::vector<enc::Attribute> attributes;

    for (unsigned i = 0; i < n; ++i) {
        const std::string key = "attr" + std::to_string(i);
        Condition cond;
        cond.key = key;
        enc::Attribute attr;
        attr.key = key;
        if (type == "equal") {
            cond.op = Op::EQ;
            cond.value = enc::AttributeValue::make_string("value-" + std::to_string(i));
            attr.value = cond.value;
            schema.attribute_specs.push_back({key, enc::ValueKind::String, true});
        } else if (type == "range") {
            cond.op = Op::GEQ;
            cond.value = enc::AttributeValue::make_int(100 + (std::int64_t)i);
            attr.value = enc::AttributeValue::make_int(1000 + (std::int64_t)i);
            schema.attribute_specs.push_back({key, enc::ValueKind::Integer, true});
        } else if (type == "member") {
            const std::string set_name = "bench-set-" + std::to_string(i);
            std::vector<enc::AttributeValue> members;
            for (unsigned m = 0; m < 8; ++m)
                members.push_back(enc::AttributeValue::make_string(
                    "m" + std::to_string(i) + "-" + std::to_string(m)));
            fx.aux.sets.emplace(set_name, policy::MembershipSet(members, 3));
            cond.op = Op::IN;
            cond.set_ref = "set:" + set_name;
            cond.value = enc::AttributeValue{};
            attr.value = members[3];
            schema.attribute_specs.push_back({key, enc::ValueKind::String, true});
            const auto& set = fx.aux.sets.at(set_name);
            fx.aux_roots.push_back({set_name, set.in_root(), set.gap_root()});
        } else {
            throw std::invalid_argument("unknown proof type: " + type);
        }
        fx.spec.conditions.push_back(cond);
        attributes.push_back(attr);
    }

    fx.spec.scheme = scheme;
    fx.spec.merkle_depth = 3;
    fx.spec.issuer_public_key = fx.issuer.public_key;
    fx.vc = identity::issue_credential(fx.issuer.secret_key, fx.subject.public_key, attributes,
                                       schema);
    return fx;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

crypto::HashDigest nonce_digest(const ff::Fr& nonce) {
    crypto::HashDigest d;
    ff::field_to_bytes(nonce, d.data());
    return d;
}

BenchRecord run_cell(const std::string& type, Scheme scheme, unsigned n,
                     const BenchOptions& options) {
    const std::string tag =
        type + "-" + policy::scheme_name(scheme) + "-" + std::to_string(n);
    Bytes cell_seed = options.seed;
    append(cell_seed, bytes_of("/" + tag));
    const CellFixture fx = make_fixture(type, scheme, n, cell_seed);

    BenchRecord rec;
    rec.proof_type = type;
    rec.scheme = policy::scheme_name(scheme);
    rec.condition_count = n;
    rec.repetitions = options.repetitions;

    const r1cs::ConstraintSystem cs = circuit::compile_policy_circuit(fx.spec);
    rec.constraint_count = cs.num_constraints();

    std::filesystem::create_directories(options.work_dir);
    const std::filesystem::path ecs_path = options.work_dir / (tag + ".ecs");
    const std::filesystem::path pk_path = options.work_dir / (tag + ".pk");
    cs.save(ecs_path);
    rec.compiled_size_bytes = std::filesystem::file_size(ecs_path);

    const auto backend = proofsys::make_backend(options.backend);
    const crypto::HashDigest digest = circuit::circuit_digest(fx.spec);

    Bytes vk;
    std::vector<double> setup_times;
    for (unsigned rep = 0; rep < options.repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        vk = backend->setup(cs, digest, proofsys::default_srs_seed(), pk_path);
        setup_times.push_back(seconds_since(t0));
    }
    rec.setup_time_s = median(setup_times);
    rec.pk_size_bytes = std::filesystem::file_size(pk_path);
    rec.vk_size_bytes = vk.size();

    // one fresh ledger per cell so cache state never leaks between cells
    chain::GenesisConfig genesis;
    genesis.owner = "owner";
    genesis.chain_seed = cell_seed;
    genesis.balances["user"] = {1000000000000ull, 1000000000000ull};
    chain::Ledger ledger(genesis);

    policy::VprZk vpr;
    vpr.function_id = "bench-fn";
    vpr.conditions = fx.spec.conditions;
    vpr.scheme = scheme;
    vpr.ecs_ref = tag + ".ecs";
    vpr.proving_key_ref = tag + ".pk";
    vpr.verification_key = vk;
    vpr.aux_roots = fx.aux_roots;
    vpr.uses_timestamp = false;
    vpr.merkle_depth = 3;

    const chain::Receipt reg = ledger.register_policy("owner", "bench-fn", vpr,
                                                      fx.issuer.public_key,
                                                      {fx.issuer.public_key});
    if (!reg.granted)
        throw std::runtime_error("bench cell " + tag + ": policy registration failed: " +
                                 reg.detail);

    const ff::Fr nonce = ledger.request_nonce("user");

    circuit::WitnessInputs inputs;
    inputs.nonce = nonce;
    inputs.subject_public_key = fx.subject.public_key;
    inputs.key_signature = crypto::ds_sign_digest(fx.subject.secret_key, nonce_digest(nonce));
    inputs.timestamp = 0;
    for (unsigned i = 0; i < n; ++i) {
        circuit::ClaimWitness cw;
        cw.value_repr = enc::value_repr(fx.vc.claims[i].attribute.value);
        cw.issuer_signature = fx.vc.claim_signatures[i];
        inputs.claims.push_back(cw);
        inputs.claim_hashes.push_back(identity::claim_hash(fx.vc.claims[i]));
    }
    if (type == "member") {
        for (unsigned i = 0; i < n; ++i) {
            const auto& set = fx.aux.resolve(fx.spec.conditions[i].set_ref);
            const crypto::HashDigest repr = enc::value_repr(fx.vc.claims[i].attribute.value);
            circuit::MembershipWitness mw;
            mw.path = set.in_path(*set.leaf_index(repr));
            inputs.memberships.push_back(mw);
            inputs.roots.push_back(set.in_root());
        }
    }

    std::vector<ff::Fr> assignment;
    std::vector<double> witness_times;
    for (unsigned rep = 0; rep < options.repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        assignment = circuit::generate_witness(fx.spec, cs, inputs);
        witness_times.push_back(seconds_since(t0));
    }
    rec.witness_time_s = median(witness_times);

    Bytes proof;
    std::vector<double> prove_times;
    for (unsigned rep = 0; rep < options.repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        proof = backend->prove(cs, pk_path, assignment);
        prove_times.push_back(seconds_since(t0));
    }
    rec.prove_time_s = median(prove_times);

    holder::VpZk vp;
    vp.function_id = "bench-fn";
    vp.nonce = nonce;
    vp.claim_hashes = inputs.claim_hashes;
    if (scheme == Scheme::CommitAndProve)
        for (unsigned i = 0; i < n; ++i) vp.claim_signatures.push_back(fx.vc.claim_signatures[i]);
    vp.roots = inputs.roots;
    vp.timestamp = 0;
    vp.proof = proof;

    const chain::Receipt receipt = ledger.submit_access(
        "user", "bench-fn", vp, enc::Json{{"action", "deposit"}, {"amount1", 1000}, {"amount2", 1000}});
    if (!receipt.granted)
        throw std::runtime_error("bench cell " + tag + ": access rejected: " + receipt.detail);
    rec.verify_cost_units = receipt.cost_units;

    if (!options.keep_proving_keys) std::filesystem::remove(pk_path);
    return rec;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchOptions& options) {
    if (options.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    std::vector<BenchRecord> records;
    for (const std::string& type : options.proof_types)
        for (const Scheme scheme : options.schemes)
            for (const unsigned n : options.condition_counts) {
                if (options.progress)
                    *options.progress << "bench: " << type << " " << policy::scheme_name(scheme)
                                      << " n=" << n << " ..." << std::endl;
                records.push_back(run_cell(type, scheme, n, options));
                if (options.progress) {
                    const BenchRecord& r = records.back();
                    *options.progress << "  constraints=" << r.constraint_count
                                      << " setup=" << r.setup_time_s << "s prove="
                                      << r.prove_time_s << "s pk=" << r.pk_size_bytes
                                      << "B vk=" << r.vk_size_bytes << "B cost="
                                      << r.verify_cost_units << std::endl;
                }
            }
    return records;
}

// ===== CSV =====

namespace {
constexpr const char* kCsvHeader =
    "proof_type,scheme,condition_count,witness_time_s,setup_time_s,prove_time_s,"
    "compiled_size_bytes,pk_size_bytes,vk_size_bytes,verify_cost_units,constraint_count,"
    "repetitions";
}

void write_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open CSV for writing: " + path.string());
    out << kCsvHeader << "\n";
    char line[512];
    for (const BenchRecord& r : records) {
        std::snprintf(line, sizeof line, "%s,%s,%u,%.6f,%.6f,%.6f,%llu,%llu,%llu,%llu,%llu,%u",
                      r.proof_type.c_str(), r.scheme.c_str(), r.condition_count, r.witness_time_s,
                      r.setup_time_s, r.prove_time_s,
                      (unsigned long long)r.compiled_size_bytes,
                      (unsigned long long)r.pk_size_bytes, (unsigned long long)r.vk_size_bytes,
                      (unsigned long long)r.verify_cost_units,
                      (unsigned long long)r.constraint_count, r.repetitions);
        out << line << "\n";
    }
}

std::vector<BenchRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("malformed CSV header in " + path.string());
    std::vector<BenchRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.size() != 12)
            throw std::invalid_argument("malformed CSV row: " + line);
        BenchRecord r;
        r.proof_type = cols[0];
        r.scheme = cols[1];
        r.condition_count = (unsigned)std::stoul(cols[2]);
        r.witness_time_s = std::stod(cols[3]);
        r.setup_time_s = std::stod(cols[4]);
        r.prove_time_s = std::stod(cols[5]);
        r.compiled_size_bytes = std::stoull(cols[6]);
        r.pk_size_bytes = std::stoull(cols[7]);
        r.vk_size_bytes = std::stoull(cols[8]);
        r.verify_cost_units = std::stoull(cols[9]);
        r.constraint_count = std::stoull(cols[10]);
        r.repetitions = (unsigned)std::stoul(cols[11]);
        records.push_back(r);
    }
    return records;
}

// ===== Report =====

namespace {

const BenchRecord* find_record(const std::vector<BenchRecord>& records, const std::string& type,
                               const std::string& scheme, unsigned n) {
    for (const auto& r : records)
        if (r.proof_type == type && r.scheme == scheme && r.condition_count == n) return &r;
    return nullptr;
}

std::string pct_reduction(double base, double value) {
    if (base <= 0) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, " (-%.1f%%)", 100.0 * (base - value) / base);
    return buf;
}

struct Fit {
    double slope = 0, intercept = 0, residual_ratio = 0;
};

// least squares y = slope·n + intercept with residual ratio max|r|/mean(y)
Fit least_squares(const std::vector<std::pair<double, double>>& pts) {
    Fit fit;
    const double k = (double)pts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = k * sxx - sx * sx;
    if (den == 0) return fit;
    fit.slope = (k * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / k;
    const double mean = sy / k;
    double worst = 0;
    for (const auto& [x, y] : pts)
        worst = std::max(worst, std::fabs(y - (fit.slope * x + fit.intercept)));
    fit.residual_ratio = mean != 0 ? worst / std::fabs(mean) : 0;
    return fit;
}

}  // namespace

std::string render_report(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    const std::vector<std::string> types = {"equal", "range", "member"};

    std::vector<unsigned> counts;
    for (const auto& r : records)
        if (std::find(counts.begin(), counts.end(), r.condition_count) == counts.end())
            counts.push_back(r.condition_count);
    std::sort(counts.begin(), counts.end());

    char line[512];
    for (const unsigned n : counts) {
        out << "== Scheme comparison, n = " << n << " ==\n";
        std::snprintf(line, sizeof line, "%-10s %-9s %14s %22s %12s %14s %10s %12s\n", "type",
                      "scheme", "constraints", "prove_s", "setup_s", "pk_bytes", "vk_bytes",
                      "cost_units");
        out << line;
        for (const std::string& type : types) {
            const BenchRecord* base = find_record(records, type, "baseline", n);
            const BenchRecord* cp = find_record(records, type, "cp", n);
            for (const BenchRecord* r : {base, cp}) {
                if (!r) continue;
                std::string constr = std::to_string(r->constraint_count);
                char prove[64];
                std::snprintf(prove, sizeof prove, "%.3f", r->prove_time_s);
                std::string prove_s = prove;
                if (r == cp && base) {
                    constr += pct_reduction((double)base->constraint_count,
                                            (double)r->constraint_count);
                    prove_s += pct_reduction(base->prove_time_s, r->prove_time_s);
                }
                std::snprintf(line, sizeof line, "%-10s %-9s %14s %22s %12.3f %14llu %10llu %12llu\n",
                              r->proof_type.c_str(), r->scheme.c_str(), constr.c_str(),
                              prove_s.c_str(), r->setup_time_s,
                              (unsigned long long)r->pk_size_bytes,
                              (unsigned long long)r->vk_size_bytes,
                              (unsigned long long)r->verify_cost_units);
                out << line;
            }
        }
        out << "\n";
    }

    out << "== Scaling in condition count ==\n";
    bool any_trend = false;
    for (const std::string& type : types)
        for (const std::string& scheme : {std::string("baseline"), std::string("cp")}) {
            std::vector<std::pair<double, double>> constr_pts, prove_pts;
            for (const auto& r : records)
                if (r.proof_type == type && r.scheme == scheme) {
                    constr_pts.push_back({(double)r.condition_count, (double)r.constraint_count});
                    prove_pts.push_back({(double)r.condition_count, r.prove_time_s});
                }
            if (constr_pts.size() < 2) continue;
            any_trend = true;
            std::sort(constr_pts.begin(), constr_pts.end());
            std::sort(prove_pts.begin(), prove_pts.end());
            const Fit cf = least_squares(constr_pts);
            const Fit pf = least_squares(prove_pts);
            bool monotone = true;
            for (std::size_t i = 1; i < prove_pts.size(); ++i)
                if (prove_pts[i].second < prove_pts[i - 1].second) monotone = false;
            std::snprintf(line, sizeof line,
                          "%-10s %-9s constraints: slope %.1f/cond intercept %.1f residual %.4f\n",
                          type.c_str(), scheme.c_str(), cf.slope, cf.intercept, cf.residual_ratio);
            out << line;
            std::snprintf(line, sizeof line,
                          "%-10s %-9s prove_s:     slope %.4f/cond residual %.4f monotonic %s\n",
                          type.c_str(), scheme.c_str(), pf.slope, pf.residual_ratio,
                          monotone ? "yes" : "NO");
            out << line;
        }
    if (!any_trend) out << "trend: not enough cells for a fit\n";
    out << "\n";

    out << "== Verification key sizes ==\n";
    bool all_equal = true, compared = false;
    for (const std::string& type : types)
        for (const unsigned n : counts) {
            const BenchRecord* base = find_record(records, type, "baseline", n);
            const BenchRecord* cp = find_record(records, type, "cp", n);
            if (!base || !cp) continue;
            compared = true;
            if (base->vk_size_bytes != cp->vk_size_bytes) {
                all_equal = false;
                std::snprintf(line, sizeof line, "%s n=%u: baseline vk %llu B, cp vk %llu B\n",
                              type.c_str(), n, (unsigned long long)base->vk_size_bytes,
                              (unsigned long long)cp->vk_size_bytes);
                out << line;
            }
        }
    if (compared && all_equal)
        out << "vk sizes identical between schemes at every measured n: no vk effect\n";
    else if (!compared)
        out << "vk comparison: need both schemes for at least one cell\n";

    return out.str();
}

}  // namespace bench
}  // namespace zkperm
