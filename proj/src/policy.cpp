#include "zkperm/policy.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "zkperm/policy_circuit.hpp"
#include "zkperm/proofsys.hpp"

namespace zkperm {
namespace policy {

// ===== Operators =====

std::string op_name(Op op) {
    switch (op) {
        case Op::EQ: return "EQ";
        case Op::NEQ: return "NEQ";
        case Op::GT: return "GT";
        case Op::LT: return "LT";
        case Op::GEQ: return "GEQ";
        case Op::LEQ: return "LEQ";
        case Op::IN: return "IN";
        case Op::NOTIN: return "NOTIN";
    }
    throw std::invalid_argument("unknown operator");
}

Op op_from_name(const std::string& name) {
    if (name == "EQ") return Op::EQ;
    if (name == "NEQ") return Op::NEQ;
    if (name == "GT") return Op::GT;
    if (name == "LT") return Op::LT;
    if (name == "GEQ") return Op::GEQ;
    if (name == "LEQ") return Op::LEQ;
    if (name == "IN") return Op::IN;
    if (name == "NOTIN") return Op::NOTIN;
    throw std::invalid_argument("unknown operator name: " + name);
}

bool op_is_range(Op op) {
    return op == Op::GT || op == Op::LT || op == Op::GEQ || op == Op::LEQ;
}

bool op_is_membership(Op op) { return op == Op::IN || op == Op::NOTIN; }

enc::Json Condition::to_json() const {
    return enc::Json{{"key", key},
                     {"op", op_name(op)},
                     {"setRef", set_ref},
                     {"timeRelative", time_relative},
                     {"value", value.to_json()}};
}

Condition Condition::from_json(const enc::Json& j) {
    Condition c;
    c.key = j.at("key").get<std::string>();
    c.op = op_from_name(j.at("op").get<std::string>());
    c.set_ref = j.value("setRef", std::string());
    if (c.set_ref.empty()) c.set_ref = j.value("set", std::string());
    c.time_relative = j.value("timeRelative", false);
    if (j.contains("value")) c.value = enc::AttributeValue::from_json(j.at("value"));
    if (c.key.empty()) throw std::invalid_argument("condition key must not be empty");
    if (op_is_membership(c.op) && c.set_ref.empty())
        throw std::invalid_argument("membership condition needs a set reference");
    if (c.time_relative && !op_is_range(c.op))
        throw std::invalid_argument("time-relative only applies to range operators");
    return c;
}

// ===== Membership sets =====

namespace {

std::vector<crypto::HashDigest> sorted_reprs(const std::vector<enc::AttributeValue>& values) {
    if (values.empty()) throw std::invalid_argument("membership set must not be empty");
    std::vector<crypto::HashDigest> reprs;
    reprs.reserve(values.size());
    for (const auto& v : values) reprs.push_back(enc::value_repr(v));
    std::sort(reprs.begin(), reprs.end());
    if (std::adjacent_find(reprs.begin(), reprs.end()) != reprs.end())
        throw std::invalid_argument("membership set contains duplicate values");
    return reprs;
}

std::vector<crypto::HashDigest> gap_leaves(const std::vector<crypto::HashDigest>& reprs) {
    std::vector<crypto::HashDigest> leaves;
    leaves.reserve(reprs.size());
    for (std::size_t i = 0; i + 1 < reprs.size(); ++i)
        leaves.push_back(gap_pair_leaf(reprs[i], reprs[i + 1]));
    leaves.push_back(gap_pair_leaf(reprs.back(), reprs.front()));
    return leaves;
}

}  // namespace

MembershipSet::MembershipSet(std::vector<enc::AttributeValue> values, unsigned depth)
    : values_(std::move(values)),
      reprs_(sorted_reprs(values_)),
      in_tree_(std::vector<crypto::HashDigest>(reprs_.begin(), reprs_.end()), depth),
      gap_tree_(gap_leaves(reprs_), depth) {}

bool MembershipSet::contains(const crypto::HashDigest& repr) const {
    return std::binary_search(reprs_.begin(), reprs_.end(), repr);
}

std::optional<std::size_t> MembershipSet::leaf_index(const crypto::HashDigest& repr) const {
    auto it = std::lower_bound(reprs_.begin(), reprs_.end(), repr);
    if (it == reprs_.end() || *it != repr) return std::nullopt;
    return (std::size_t)(it - reprs_.begin());
}

std::optional<MembershipSet::GapWitness> MembershipSet::gap_witness(
    const crypto::HashDigest& repr) const {
    if (contains(repr)) return std::nullopt;
    std::size_t pair_index;
    if (repr < reprs_.front() || repr > reprs_.back()) {
        pair_index = reprs_.size() - 1;  // wrap pair (max, min)
    } else {
        auto it = std::upper_bound(reprs_.begin(), reprs_.end(), repr);
        pair_index = (std::size_t)(it - reprs_.begin()) - 1;
    }
    GapWitness w;
    w.pair_index = pair_index;
    w.lower = reprs_[pair_index];
    w.upper = reprs_[(pair_index + 1) % reprs_.size()];
    w.path = gap_tree_.path(pair_index);
    return w;
}

crypto::HashDigest gap_pair_leaf(const crypto::HashDigest& lower, const crypto::HashDigest& upper) {
    Bytes buf;
    buf.insert(buf.end(), lower.begin(), lower.end());
    buf.insert(buf.end(), upper.begin(), upper.end());
    return crypto::sha256(buf);
}

// ===== Auxiliary data =====

std::string set_name_from_ref(const std::string& set_ref) {
    constexpr const char* kPrefix = "set:";
    if (set_ref.rfind(kPrefix, 0) != 0 || set_ref.size() == 4)
        throw std::invalid_argument("malformed set reference: " + set_ref);
    return set_ref.substr(4);
}

const MembershipSet& AuxData::resolve(const std::string& set_ref) const {
    std::string name = set_name_from_ref(set_ref);
    auto it = sets.find(name);
    if (it == sets.end()) throw std::runtime_error("unknown membership set: " + name);
    return it->second;
}

// ===== Plain evaluation =====

namespace {

bool is_numeric(enc::ValueKind k) {
    return k == enc::ValueKind::Integer || k == enc::ValueKind::Date;
}

}  // namespace

bool comp_check_plain(const enc::Attribute& attribute, const Condition& condition,
                      const AuxData& aux) {
    if (attribute.key != condition.key)
        throw std::invalid_argument("attribute key does not match condition key");
    switch (condition.op) {
        case Op::EQ:
            return attribute.value == condition.value;
        case Op::NEQ:
            return !(attribute.value == condition.value);
        case Op::GT:
        case Op::LT:
        case Op::GEQ:
        case Op::LEQ: {
            if (!is_numeric(attribute.value.kind))
                throw std::invalid_argument("range comparison needs a numeric attribute");
            if (!is_numeric(condition.value.kind) &&
                !(condition.time_relative && condition.value.kind == enc::ValueKind::Integer))
                throw std::invalid_argument("range comparison needs a numeric target");
            std::int64_t lhs = attribute.value.num;
            std::int64_t rhs = condition.time_relative
                                   ? aux.current_timestamp - condition.value.num
                                   : condition.value.num;
            switch (condition.op) {
                case Op::GT: return lhs > rhs;
                case Op::LT: return lhs < rhs;
                case Op::GEQ: return lhs >= rhs;
                default: return lhs <= rhs;
            }
        }
        case Op::IN:
            return aux.resolve(condition.set_ref).contains(enc::value_repr(attribute.value));
        case Op::NOTIN:
            return !aux.resolve(condition.set_ref).contains(enc::value_repr(attribute.value));
    }
    throw std::invalid_argument("unknown operator");
}

// ===== Presentation requests =====

std::string scheme_name(Scheme s) {
    return s == Scheme::Baseline ? "baseline" : "cp";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "baseline") return Scheme::Baseline;
    if (name == "cp") return Scheme::CommitAndProve;
    throw std::invalid_argument("unknown scheme name: " + name);
}

enc::Json VprZk::to_json() const {
    enc::Json roots = enc::Json::array();
    for (const auto& e : aux_roots) {
        roots.push_back({{"gapRoot", crypto::digest_hex(e.gap_root)},
                         {"inRoot", crypto::digest_hex(e.in_root)},
                         {"setName", e.set_name}});
    }
    enc::Json conds = enc::Json::array();
    for (const auto& c : conditions) conds.push_back(c.to_json());
    return enc::Json{{"auxRoots", roots},
                     {"conditions", conds},
                     {"ecsRef", ecs_ref},
                     {"functionId", function_id},
                     {"merkleDepth", merkle_depth},
                     {"provingKeyRef", proving_key_ref},
                     {"scheme", scheme_name(scheme)},
                     {"usesTimestamp", uses_timestamp},
                     {"verificationKey", to_hex(verification_key)}};
}

VprZk VprZk::from_json(const enc::Json& j) {
    VprZk v;
    v.function_id = j.at("functionId").get<std::string>();
    for (const auto& c : j.at("conditions")) v.conditions.push_back(Condition::from_json(c));
    v.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    v.ecs_ref = j.at("ecsRef").get<std::string>();
    v.proving_key_ref = j.at("provingKeyRef").get<std::string>();
    v.verification_key = from_hex(j.at("verificationKey").get<std::string>());
    for (const auto& e : j.at("auxRoots")) {
        AuxRootEntry entry;
        entry.set_name = e.at("setName").get<std::string>();
        entry.in_root = crypto::digest_from_hex(e.at("inRoot").get<std::string>());
        entry.gap_root = crypto::digest_from_hex(e.at("gapRoot").get<std::string>());
        v.aux_roots.push_back(entry);
    }
    v.uses_timestamp = j.at("usesTimestamp").get<bool>();
    v.merkle_depth = j.at("merkleDepth").get<unsigned>();
    if (v.function_id.empty()) throw std::invalid_argument("request needs a function id");
    if (v.conditions.empty()) throw std::invalid_argument("request needs at least one condition");
    return v;
}

bool evaluate_policy_plain(const identity::VerifiableCredential& vc, const VprZk& vpr,
                           const AuxData& aux) {
    if (!identity::verify_credential(vc)) return false;
    for (const auto& cond : vpr.conditions) {
        const identity::Claim* claim = vc.find_claim(cond.key);
        if (!claim) return false;
        if (!comp_check_plain(claim->attribute, cond, aux)) return false;
    }
    return true;
}

// ===== Request construction =====

namespace {

void check_condition_against_schema(const Condition& cond,
                                    const identity::CredentialSchema& schema) {
    const identity::AttributeSpec* spec = schema.find(cond.key);
    if (!spec)
        throw std::invalid_argument("condition key not in schema: " + cond.key);
    if (op_is_range(cond.op)) {
        if (!is_numeric(spec->kind))
            throw std::invalid_argument("range condition on non-numeric attribute: " + cond.key);
        if (cond.time_relative) {
            if (cond.value.kind != enc::ValueKind::Integer)
                throw std::invalid_argument("time-relative offset must be an integer");
        } else if (!is_numeric(cond.value.kind)) {
            throw std::invalid_argument("range target must be numeric for: " + cond.key);
        }
    } else if (!op_is_membership(cond.op)) {
        if (cond.value.kind != spec->kind)
            throw std::invalid_argument("condition value kind does not match schema for: " +
                                        cond.key);
    }
}

Bytes read_file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read artifact: " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& p, const Bytes& data) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write artifact: " + p.string());
    out.write((const char*)data.data(), (std::streamsize)data.size());
    if (!out) throw std::runtime_error("artifact write failed: " + p.string());
}

}  // namespace

VprZk build_vpr(const std::string& function_id, const std::vector<Condition>& conditions,
                Scheme scheme, const identity::CredentialSchema& schema, const AuxData& aux,
                const ec::EdPoint& issuer_public_key, proofsys::Backend& backend,
                identity::Registry& registry, const std::filesystem::path& artifact_dir) {
    if (function_id.empty()) throw std::invalid_argument("function id must not be empty");
    if (conditions.empty()) throw std::invalid_argument("request needs at least one condition");

    VprZk vpr;
    vpr.function_id = function_id;
    vpr.conditions = conditions;
    vpr.scheme = scheme;

    unsigned depth = 0;
    for (const auto& cond : conditions) {
        check_condition_against_schema(cond, schema);
        vpr.uses_timestamp = vpr.uses_timestamp || cond.time_relative;
        if (op_is_membership(cond.op)) {
            const MembershipSet& set = aux.resolve(cond.set_ref);
            if (depth == 0) {
                depth = set.depth();
            } else if (depth != set.depth()) {
                throw std::invalid_argument("all sets in one request must share a tree depth");
            }
            vpr.aux_roots.push_back(
                {set_name_from_ref(cond.set_ref), set.in_root(), set.gap_root()});
        }
    }
    vpr.merkle_depth = depth ? depth : 3;

    circuit::CircuitSpec spec;
    spec.conditions = conditions;
    spec.scheme = scheme;
    spec.merkle_depth = vpr.merkle_depth;
    spec.issuer_public_key = issuer_public_key;

    crypto::HashDigest digest = circuit::circuit_digest(spec);
    std::string tag = "c-" + crypto::digest_hex(digest).substr(0, 16);
    std::filesystem::create_directories(artifact_dir);
    std::filesystem::path ecs_path = artifact_dir / (tag + ".ecs");
    std::filesystem::path pk_path = artifact_dir / (tag + "." + backend.name() + ".pk");
    std::filesystem::path vk_path = artifact_dir / (tag + "." + backend.name() + ".vk");
    vpr.ecs_ref = ecs_path.filename().string();
    vpr.proving_key_ref = pk_path.filename().string();

    if (std::filesystem::exists(ecs_path) && std::filesystem::exists(pk_path) &&
        std::filesystem::exists(vk_path)) {
        vpr.verification_key = read_file_bytes(vk_path);
    } else {
        r1cs::ConstraintSystem cs = circuit::compile_policy_circuit(spec);
        cs.save(ecs_path);
        vpr.verification_key = backend.setup(cs, digest, proofsys::default_srs_seed(), pk_path);
        write_file_bytes(vk_path, vpr.verification_key);
    }

    registry.put(identity::RecordKind::VprZk, function_id, vpr.to_json());
    return vpr;
}

}  // namespace policy
}  // namespace zkperm
