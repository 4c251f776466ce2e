#include "zkperm/encoding.hpp"

#include <stdexcept>

namespace zkperm {
namespace enc {

Bytes canonical_octets(const Json& j) {
    std::string s = j.dump();
    return Bytes(s.begin(), s.end());
}

crypto::HashDigest canonical_digest(const Json& j) {
    return crypto::hash_canonical(canonical_octets(j));
}

std::string value_kind_name(ValueKind k) {
    switch (k) {
        case ValueKind::Integer: return "integer";
        case ValueKind::Date: return "date";
        case ValueKind::String: return "string";
    }
    throw std::invalid_argument("unknown value kind");
}

ValueKind value_kind_from_name(const std::string& name) {
    if (name == "integer") return ValueKind::Integer;
    if (name == "date") return ValueKind::Date;
    if (name == "string") return ValueKind::String;
    throw std::invalid_argument("unknown value kind: " + name);
}

AttributeValue AttributeValue::make_int(std::int64_t v) {
    AttributeValue a;
    a.kind = ValueKind::Integer;
    a.num = v;
    return a;
}

AttributeValue AttributeValue::make_date(std::int64_t unix_seconds) {
    AttributeValue a;
    a.kind = ValueKind::Date;
    a.num = unix_seconds;
    return a;
}

AttributeValue AttributeValue::make_string(std::string v) {
    if (v.size() > 64) throw std::invalid_argument("string attribute exceeds 64 bytes");
    AttributeValue a;
    a.kind = ValueKind::String;
    a.str = std::move(v);
    return a;
}

bool AttributeValue::operator==(const AttributeValue& o) const {
    if (kind != o.kind) return false;
    return kind == ValueKind::String ? str == o.str : num == o.num;
}

Json AttributeValue::to_json() const {
    Json j;
    j["kind"] = value_kind_name(kind);
    if (kind == ValueKind::String)
        j["value"] = str;
    else
        j["value"] = num;
    return j;
}

AttributeValue AttributeValue::from_json(const Json& j) {
    ValueKind kind = value_kind_from_name(j.at("kind").get<std::string>());
    if (kind == ValueKind::String) return make_string(j.at("value").get<std::string>());
    std::int64_t num = j.at("value").get<std::int64_t>();
    return kind == ValueKind::Date ? make_date(num) : make_int(num);
}

Json Attribute::to_json() const {
    Json j = value.to_json();
    j["key"] = key;
    return j;
}

Attribute Attribute::from_json(const Json& j) {
    Attribute a;
    a.key = j.at("key").get<std::string>();
    a.value = AttributeValue::from_json(j);
    if (a.key.empty()) throw std::invalid_argument("empty attribute key");
    return a;
}

crypto::HashDigest value_repr(const AttributeValue& v) {
    if (v.kind == ValueKind::String) {
        return crypto::sha256((const std::uint8_t*)v.str.data(), v.str.size());
    }
    return value_repr_from_offset((std::uint64_t)v.num + kOffsetBias);
}

crypto::HashDigest value_repr_from_offset(std::uint64_t offset_binary) {
    crypto::HashDigest d{};
    store_be64(d.data() + 24, offset_binary);
    return d;
}

}  // namespace enc
}  // namespace zkperm
