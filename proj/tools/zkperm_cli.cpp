// zkperm: attribute-based permissioning with zero-knowledge presentations.
//
// One subcommand per protocol step plus the benchmark harness. All chain
// state lives under the --registry directory as a genesis file and an
// append-only transaction log; every invocation replays the log, applies
// its mutation, and appends the new records, so state survives between
// runs and stays bit-reproducible.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "zkperm/bench.hpp"
#include "zkperm/holder.hpp"

namespace zk = zkperm;
using zk::Bytes;
using zk::enc::Json;

namespace {

// ===== Seeds and key files =====

Bytes base_seed() {
    const char* env = std::getenv("ZKPERM_SEED");
    return zk::bytes_of(env ? env : "zkperm-default-seed");
}

Bytes derived_seed(const std::string& label) {
    Bytes s = base_seed();
    zk::append(s, zk::bytes_of("/" + label));
    return s;
}

std::string limbs_hex(const zk::ff::Limbs& l) {
    std::uint8_t buf[32];
    for (int i = 0; i < 4; ++i) zk::store_be64(buf + 8 * i, l[3 - i]);
    return zk::to_hex(buf, 32);
}

zk::ff::Limbs limbs_from_hex(const std::string& hex) {
    Bytes b = zk::from_hex(hex);
    if (b.size() != 32) throw std::invalid_argument("secret key must be 32 bytes of hex");
    zk::ff::Limbs l;
    for (int i = 0; i < 4; ++i) l[3 - i] = zk::load_be64(b.data() + 8 * i);
    return l;
}

std::string point_hex(const zk::ec::EdPoint& p) {
    std::uint8_t buf[32];
    zk::ec::edwards_compress(p, buf);
    return zk::to_hex(buf, 32);
}

zk::ec::EdPoint point_from_hex(const std::string& hex) {
    Bytes b = zk::from_hex(hex);
    if (b.size() != 32) throw std::invalid_argument("public key must be 32 bytes of hex");
    return zk::ec::edwards_decompress(b.data());
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return Json::parse(in);
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

zk::crypto::SignatureKeyPair load_keypair(const std::filesystem::path& path) {
    const Json j = read_json_file(path);
    zk::crypto::SignatureKeyPair kp;
    kp.secret_key = limbs_from_hex(j.at("secretKey").get<std::string>());
    kp.public_key = point_from_hex(j.at("publicKey").get<std::string>());
    return kp;
}

// --issuer-pub wins when both are given; otherwise the key file supplies it
zk::ec::EdPoint resolve_public_key(const std::string& pub_hex, const std::string& key_path,
                                   const char* what) {
    if (!pub_hex.empty()) return point_from_hex(pub_hex);
    if (!key_path.empty()) return load_keypair(key_path).public_key;
    throw std::invalid_argument(std::string("need --") + what + "-pub or --" + what + "-key");
}

// ===== Persistent chain state =====

struct StatePaths {
    std::filesystem::path registry_dir;
    std::filesystem::path artifacts() const { return registry_dir / "artifacts"; }
    std::filesystem::path genesis() const { return registry_dir / "chain-genesis.json"; }
    std::filesystem::path txlog() const { return registry_dir / "chain-txlog.jsonl"; }
};

zk::chain::GenesisConfig default_genesis() {
    zk::chain::GenesisConfig g;
    g.owner = "owner";
    g.chain_seed = derived_seed("chain");
    g.balances["owner"] = {1000000000000ull, 1000000000000ull};
    g.balances["user"] = {1000000000000ull, 1000000000000ull};
    return g;
}

zk::chain::Ledger open_ledger(const StatePaths& paths, const std::string& config_path) {
    std::filesystem::create_directories(paths.registry_dir);
    zk::chain::GenesisConfig genesis;
    if (std::filesystem::exists(paths.genesis())) {
        genesis = zk::chain::GenesisConfig::from_json(read_json_file(paths.genesis()));
    } else {
        genesis = config_path.empty()
                      ? default_genesis()
                      : zk::chain::GenesisConfig::from_json(read_json_file(config_path));
        write_json_file(paths.genesis(), genesis.to_json());
    }
    std::vector<Json> records;
    if (std::filesystem::exists(paths.txlog())) {
        std::ifstream in(paths.txlog(), std::ios::binary);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) records.push_back(Json::parse(line));
    }
    return zk::chain::Ledger::replay(genesis, records);
}

void append_txlog(const StatePaths& paths, const zk::chain::Ledger& ledger, std::size_t from) {
    std::ofstream out(paths.txlog(), std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + paths.txlog().string());
    for (std::size_t i = from; i < ledger.log().size(); ++i) out << ledger.log()[i].dump() << "\n";
}

// ===== Attribute and set parsing =====

zk::enc::AttributeValue value_for_kind(zk::enc::ValueKind kind, const Json& v) {
    switch (kind) {
        case zk::enc::ValueKind::Integer:
            return zk::enc::AttributeValue::make_int(v.get<std::int64_t>());
        case zk::enc::ValueKind::Date:
            return zk::enc::AttributeValue::make_date(v.get<std::int64_t>());
        case zk::enc::ValueKind::String:
            return zk::enc::AttributeValue::make_string(v.get<std::string>());
    }
    throw std::invalid_argument("unknown value kind");
}

// {"name": [v, ...]} or {"name": {"depth": d, "values": [v, ...]}}; JSON
// strings become string values, JSON integers become integer values
zk::policy::AuxData load_sets(const std::string& path) {
    zk::policy::AuxData aux;
    if (path.empty()) return aux;
    const Json j = read_json_file(path);
    for (auto it = j.begin(); it != j.end(); ++it) {
        unsigned depth = 3;
        const Json* values = &it.value();
        if (it.value().is_object()) {
            depth = it.value().at("depth").get<unsigned>();
            values = &it.value().at("values");
        }
        std::vector<zk::enc::AttributeValue> members;
        for (const Json& v : *values)
            members.push_back(v.is_string()
                                  ? zk::enc::AttributeValue::make_string(v.get<std::string>())
                                  : zk::enc::AttributeValue::make_int(v.get<std::int64_t>()));
        aux.sets.emplace(it.key(), zk::policy::MembershipSet(members, depth));
    }
    return aux;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::unique_ptr<zk::proofsys::Backend> backend_for_vk(const Bytes& vk) {
    const auto id = zk::proofsys::vk_backend(vk);
    if (!id) throw std::runtime_error("request record carries an unreadable verification key");
    return zk::proofsys::make_backend(*id == zk::proofsys::BackendId::Direct ? "direct"
                                                                             : "groth16");
}

void print_receipt(const zk::chain::Receipt& receipt) {
    std::cout << receipt.to_json().dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attribute-based smart-contract permissioning with zero-knowledge presentations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string registry_dir = "registry";
    bool json_errors = false;
    app.add_option("--config", config_path, "genesis configuration JSON (used on first run)");
    app.add_option("--registry", registry_dir, "registry and chain-state directory");
    app.add_flag("--json-errors", json_errors, "print errors as machine-readable JSON");

    // keygen
    auto* c_keygen = app.add_subcommand("keygen", "create a signature keypair file");
    std::string kg_name, kg_out;
    c_keygen->add_option("--name", kg_name, "key owner name (also salts the seed)")->required();
    c_keygen->add_option("--out", kg_out, "output path (default <name>.key.json)");

    // did
    auto* c_did = app.add_subcommand("did", "register a decentralized identifier for a key");
    std::string did_key;
    c_did->add_option("--key", did_key, "keypair file")->required();

    // schema
    auto* c_schema = app.add_subcommand("schema", "register a credential schema");
    std::string schema_file;
    c_schema->add_option("--file", schema_file, "schema JSON file")->required();

    // issue
    auto* c_issue = app.add_subcommand("issue", "issue a verifiable credential");
    std::string is_issuer_key, is_subject_key, is_subject_pub, is_schema, is_attrs, is_out;
    c_issue->add_option("--issuer-key", is_issuer_key, "issuer keypair file")->required();
    c_issue->add_option("--subject-key", is_subject_key, "subject keypair file");
    c_issue->add_option("--subject-pub", is_subject_pub, "subject public key (hex)");
    c_issue->add_option("--schema", is_schema, "registered schema id")->required();
    c_issue->add_option("--attrs", is_attrs, "attribute JSON file {key: value}")->required();
    c_issue->add_option("--out", is_out, "credential output path")->required();

    // vpr-build
    auto* c_vpr = app.add_subcommand("vpr-build", "compile a policy into a presentation request");
    std::string vb_function, vb_conditions, vb_scheme = "cp", vb_issuer_key, vb_issuer_pub;
    std::string vb_schema, vb_sets, vb_backend = "groth16";
    c_vpr->add_option("--function", vb_function, "guarded function id")->required();
    c_vpr->add_option("--conditions-file", vb_conditions, "condition list JSON")->required();
    c_vpr->add_option("--scheme", vb_scheme, "baseline or cp")
        ->check(CLI::IsMember({"baseline", "cp"}));
    c_vpr->add_option("--issuer-key", vb_issuer_key, "issuer keypair file");
    c_vpr->add_option("--issuer-pub", vb_issuer_pub, "issuer public key (hex)");
    c_vpr->add_option("--schema", vb_schema, "registered schema id")->required();
    c_vpr->add_option("--sets", vb_sets, "membership set JSON file");
    c_vpr->add_option("--backend", vb_backend, "proof backend")
        ->check(CLI::IsMember({"groth16", "direct"}));

    // policy-register
    auto* c_preg = app.add_subcommand("policy-register", "register a request record on chain");
    std::string pr_function, pr_caller = "owner", pr_issuer_key, pr_issuer_pub, pr_trusted;
    c_preg->add_option("--function", pr_function, "guarded function id")->required();
    c_preg->add_option("--caller", pr_caller, "transaction sender");
    c_preg->add_option("--issuer-key", pr_issuer_key, "attestation issuer keypair file");
    c_preg->add_option("--issuer-pub", pr_issuer_pub, "attestation issuer public key (hex)");
    c_preg->add_option("--trusted", pr_trusted, "comma list of trusted issuer keys (hex)");

    // prove
    auto* c_prove = app.add_subcommand("prove", "build a zero-knowledge presentation");
    std::string pv_function, pv_vc, pv_key, pv_sets, pv_account = "user", pv_out;
    c_prove->add_option("--function", pv_function, "guarded function id")->required();
    c_prove->add_option("--vc", pv_vc, "credential file")->required();
    c_prove->add_option("--key", pv_key, "subject keypair file")->required();
    c_prove->add_option("--sets", pv_sets, "membership set JSON file");
    c_prove->add_option("--account", pv_account, "account that draws the nonce");
    c_prove->add_option("--out", pv_out, "presentation output path")->required();

    // submit
    auto* c_submit = app.add_subcommand("submit", "submit an access transaction");
    std::string sb_function, sb_vp, sb_caller = "user", sb_args;
    c_submit->add_option("--function", sb_function, "guarded function id")->required();
    c_submit->add_option("--vp", sb_vp, "presentation file")->required();
    c_submit->add_option("--caller", sb_caller, "transaction sender");
    c_submit->add_option("--args", sb_args, "pool call arguments (JSON literal)")->required();

    // advance
    auto* c_advance = app.add_subcommand("advance", "advance the block clock");
    std::int64_t adv_seconds = 0;
    c_advance->add_option("--seconds", adv_seconds, "seconds to advance")->required();

    // bench
    auto* c_bench = app.add_subcommand("bench", "run the scaling benchmark");
    std::string bn_types = "equal,range,member", bn_schemes = "baseline,cp";
    std::string bn_counts = "1,2,4,8,16", bn_backend = "groth16", bn_out = "bench.csv";
    std::string bn_work;
    unsigned bn_reps = 1;
    bool bn_keep_pk = false;
    c_bench->add_option("--proof-type", bn_types, "comma list of equal,range,member");
    c_bench->add_option("--scheme", bn_schemes, "comma list of baseline,cp");
    c_bench->add_option("--conditions", bn_counts, "comma list of condition counts");
    c_bench->add_option("--reps", bn_reps, "repetitions per timing (median)");
    c_bench->add_option("--backend", bn_backend, "proof backend")
        ->check(CLI::IsMember({"groth16", "direct"}));
    c_bench->add_option("--out", bn_out, "CSV output path");
    c_bench->add_option("--work-dir", bn_work, "artifact scratch directory");
    c_bench->add_flag("--keep-pk", bn_keep_pk, "keep proving keys after each cell");

    // report
    auto* c_report = app.add_subcommand("report", "render a comparison report from a bench CSV");
    std::string rp_csv;
    c_report->add_option("csv", rp_csv, "CSV produced by bench")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const StatePaths paths{registry_dir};

    try {
        if (*c_keygen) {
            const auto kp = zk::crypto::ds_keygen(derived_seed("key/" + kg_name));
            const Json j{{"name", kg_name},
                         {"secretKey", limbs_hex(kp.secret_key)},
                         {"publicKey", point_hex(kp.public_key)}};
            const std::string out = kg_out.empty() ? kg_name + ".key.json" : kg_out;
            write_json_file(out, j);
            std::cout << "wrote " << out << " (public key " << point_hex(kp.public_key) << ")\n";
        } else if (*c_did) {
            zk::identity::Registry reg(paths.registry_dir);
            const auto kp = load_keypair(did_key);
            const auto did = zk::identity::create_did(kp, reg);
            std::cout << did.did() << "\n";
        } else if (*c_schema) {
            zk::identity::Registry reg(paths.registry_dir);
            const auto schema = zk::identity::CredentialSchema::from_json(
                read_json_file(schema_file));
            std::cout << "registered schema " << zk::identity::register_schema(schema, reg)
                      << "\n";
        } else if (*c_issue) {
            zk::identity::Registry reg(paths.registry_dir);
            const auto issuer = load_keypair(is_issuer_key);
            const auto subject_pk = resolve_public_key(is_subject_pub, is_subject_key, "subject");
            const auto schema = zk::identity::load_schema(reg, is_schema);
            const Json attrs = read_json_file(is_attrs);
            std::vector<zk::enc::Attribute> attributes;
            for (auto it = attrs.begin(); it != attrs.end(); ++it) {
                const auto* spec = schema.find(it.key());
                if (!spec)
                    throw std::invalid_argument("attribute '" + it.key() +
                                                "' is not in schema " + is_schema);
                attributes.push_back({it.key(), value_for_kind(spec->kind, it.value())});
            }
            const auto vc = zk::identity::issue_credential(issuer.secret_key, subject_pk,
                                                           attributes, schema);
            write_json_file(is_out, vc.to_json());
            std::cout << "issued credential with " << vc.claims.size() << " claims to " << is_out
                      << "\n";
        } else if (*c_vpr) {
            zk::identity::Registry reg(paths.registry_dir);
            const auto issuer_pk = resolve_public_key(vb_issuer_pub, vb_issuer_key, "issuer");
            const auto schema = zk::identity::load_schema(reg, vb_schema);
            std::vector<zk::policy::Condition> conditions;
            for (const Json& cj : read_json_file(vb_conditions))
                conditions.push_back(zk::policy::Condition::from_json(cj));
            const auto aux = load_sets(vb_sets);
            const auto backend = zk::proofsys::make_backend(vb_backend);
            const auto vpr = zk::policy::build_vpr(vb_function, conditions,
                                                   zk::policy::scheme_from_name(vb_scheme),
                                                   schema, aux, issuer_pk, *backend, reg,
                                                   paths.artifacts());
            std::cout << "registered request record for '" << vb_function << "' (scheme "
                      << vb_scheme << ", circuit " << vpr.ecs_ref << ", vk "
                      << vpr.verification_key.size() << " bytes)\n";
        } else if (*c_preg) {
            zk::identity::Registry reg(paths.registry_dir);
            const auto vpr = zk::policy::VprZk::from_json(
                reg.get(zk::identity::RecordKind::VprZk, pr_function));
            const auto issuer_pk = resolve_public_key(pr_issuer_pub, pr_issuer_key, "issuer");
            std::vector<zk::ec::EdPoint> trusted;
            for (const std::string& hex : split_list(pr_trusted))
                trusted.push_back(point_from_hex(hex));
            if (trusted.empty()) trusted.push_back(issuer_pk);
            auto ledger = open_ledger(paths, config_path);
            const std::size_t mark = ledger.log().size();
            const auto receipt = ledger.register_policy(pr_caller, pr_function, vpr, issuer_pk,
                                                        trusted);
            append_txlog(paths, ledger, mark);
            print_receipt(receipt);
            return receipt.granted ? 0 : 1;
        } else if (*c_prove) {
            zk::identity::Registry reg(paths.registry_dir);
            const auto vpr = zk::policy::VprZk::from_json(
                reg.get(zk::identity::RecordKind::VprZk, pv_function));
            const auto vc = zk::identity::VerifiableCredential::from_json(read_json_file(pv_vc));
            const auto subject = load_keypair(pv_key);
            auto ledger = open_ledger(paths, config_path);
            const std::size_t mark = ledger.log().size();
            const auto nonce = ledger.request_nonce(pv_account);
            append_txlog(paths, ledger, mark);
            auto aux = load_sets(pv_sets);
            aux.current_timestamp = ledger.block_timestamp();
            const auto backend = backend_for_vk(vpr.verification_key);
            const auto vp = zk::holder::build_presentation(vc, subject, vpr, aux, nonce, *backend,
                                                           paths.artifacts());
            write_json_file(pv_out, vp.to_json());
            std::cout << "wrote presentation (" << vp.proof.size() << "-byte proof) to " << pv_out
                      << "\n";
        } else if (*c_submit) {
            const auto vp = zk::holder::VpZk::from_json(read_json_file(sb_vp));
            auto ledger = open_ledger(paths, config_path);
            const std::size_t mark = ledger.log().size();
            const auto receipt = ledger.submit_access(sb_caller, sb_function, vp,
                                                      Json::parse(sb_args));
            append_txlog(paths, ledger, mark);
            print_receipt(receipt);
            return receipt.granted ? 0 : 1;
        } else if (*c_advance) {
            auto ledger = open_ledger(paths, config_path);
            const std::size_t mark = ledger.log().size();
            ledger.advance_block(adv_seconds);
            append_txlog(paths, ledger, mark);
            std::cout << Json{{"blockHeight", ledger.block_height()},
                              {"blockTimestamp", ledger.block_timestamp()}}
                             .dump()
                      << "\n";
        } else if (*c_bench) {
            zk::bench::BenchOptions options;
            options.proof_types = split_list(bn_types);
            options.schemes.clear();
            for (const std::string& s : split_list(bn_schemes))
                options.schemes.push_back(zk::policy::scheme_from_name(s));
            options.condition_counts.clear();
            for (const std::string& c : split_list(bn_counts))
                options.condition_counts.push_back((unsigned)std::stoul(c));
            options.repetitions = bn_reps;
            options.backend = bn_backend;
            options.work_dir = bn_work.empty() ? paths.registry_dir / "bench-work"
                                               : std::filesystem::path(bn_work);
            options.seed = derived_seed("bench");
            options.keep_proving_keys = bn_keep_pk;
            options.progress = &std::cerr;
            const auto records = zk::bench::run_bench(options);
            zk::bench::write_csv(records, bn_out);
            std::cout << "wrote " << records.size() << " records to " << bn_out << "\n";
        } else if (*c_report) {
            std::cout << zk::bench::render_report(zk::bench::read_csv(rp_csv));
        }
        return 0;
    } catch (const zk::holder::PresentationRefused& e) {
        if (json_errors)
            std::cout << Json{{"code", "PRESENTATION_REFUSED"}, {"error", e.what()}}.dump()
                      << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        if (json_errors)
            std::cout << Json{{"code", "INVALID_ARGUMENT"}, {"error", e.what()}}.dump() << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        if (json_errors)
            std::cout << Json{{"code", "ERROR"}, {"error", e.what()}}.dump() << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
