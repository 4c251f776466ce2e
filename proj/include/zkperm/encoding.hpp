#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "zkperm/sha256.hpp"

namespace zkperm {
namespace enc {

using Json = nlohmann::json;

// ===== Canonical JSON =====
//
// The normative octet encoding for every hashed or signed structure:
// field-name-sorted objects, no whitespace, integers base-10, byte arrays
// as lowercase hex strings. nlohmann keeps object keys sorted, so a compact
// dump is already canonical.

Bytes canonical_octets(const Json& j);
crypto::HashDigest canonical_digest(const Json& j);

// ===== Attribute values =====

enum class ValueKind : std::uint8_t { Integer = 0, Date = 1, String = 2 };

std::string value_kind_name(ValueKind k);
ValueKind value_kind_from_name(const std::string& name);

struct AttributeValue {
    ValueKind kind = ValueKind::Integer;
    std::int64_t num = 0;  // Integer and Date payload
    std::string str;       // String payload, at most 64 bytes

    static AttributeValue make_int(std::int64_t v);
    static AttributeValue make_date(std::int64_t unix_seconds);
    static AttributeValue make_string(std::string v);

    bool operator==(const AttributeValue& o) const;

    Json to_json() const;
    static AttributeValue from_json(const Json& j);
};

struct Attribute {
    std::string key;
    AttributeValue value;

    Json to_json() const;
    static Attribute from_json(const Json& j);
};

// ===== Value representation =====
//
// Fixed 32-byte form of an attribute value, used as the unit the circuit
// reasons about: equality compares it, membership trees store it, range
// conditions decode it.
//   strings        -> SHA-256 of the raw bytes
//   integers/dates -> big-endian offset-binary (v + 2^63), top 24 bytes zero
// Offset-binary keeps the numeric order of signed values equal to the
// lexicographic order of the encodings.

crypto::HashDigest value_repr(const AttributeValue& v);

// repr of an integer already shifted into offset-binary space
crypto::HashDigest value_repr_from_offset(std::uint64_t offset_binary);

constexpr std::uint64_t kOffsetBias = 0x8000000000000000ull;

}  // namespace enc
}  // namespace zkperm
