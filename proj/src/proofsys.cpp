#include "zkperm/proofsys.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "zkperm/field.hpp"
#include "zkperm/groth16.hpp"

namespace zkperm {
namespace proofsys {

// ===== Containers =====

constexpr std::size_t kHeaderSize = 4 + 1 + 1 + 32;

Bytes make_container(const char magic[4], BackendId backend, const crypto::HashDigest& digest,
                     const Bytes& payload) {
    Bytes out;
    out.reserve(kHeaderSize + payload.size());
    append(out, reinterpret_cast<const std::uint8_t*>(magic), 4);
    out.push_back(static_cast<std::uint8_t>(backend));
    out.push_back(kCurveId);
    append(out, digest.data(), digest.size());
    append(out, payload);
    return out;
}

std::optional<ContainerView> parse_container(const Bytes& data, const char magic[4]) {
    if (data.size() < kHeaderSize) return std::nullopt;
    if (std::memcmp(data.data(), magic, 4) != 0) return std::nullopt;
    const std::uint8_t backend = data[4];
    if (backend != static_cast<std::uint8_t>(BackendId::Direct) &&
        backend != static_cast<std::uint8_t>(BackendId::Succinct))
        return std::nullopt;
    if (data[5] != kCurveId) return std::nullopt;
    ContainerView view;
    view.backend = static_cast<BackendId>(backend);
    std::memcpy(view.circuit_digest.data(), data.data() + 6, 32);
    view.payload = data.data() + kHeaderSize;
    view.payload_size = data.size() - kHeaderSize;
    return view;
}

// ===== Direct backend =====
//
// Key file layout: magic (8) | circuit digest (32) | key (32).
// Verification-key payload: num_public u32 LE | key (32).
// Proof payload: 32-byte tag over (key, digest, public input).

namespace {

constexpr char kDirectPkMagic[8] = {'Z', 'K', 'D', 'I', 'R', 'P', 'K', '1'};

crypto::HashDigest direct_key(const Bytes& srs_seed, const crypto::HashDigest& digest) {
    Bytes material = bytes_of("direct-backend-key");
    append(material, srs_seed);
    append(material, digest.data(), digest.size());
    return crypto::sha256(material);
}

crypto::HashDigest direct_tag(const std::uint8_t key[32], const crypto::HashDigest& digest,
                              const std::vector<Fr>& public_input) {
    Bytes material = bytes_of("direct-backend-proof");
    append(material, key, 32);
    append(material, digest.data(), digest.size());
    std::uint8_t count[8];
    store_be64(count, public_input.size());
    append(material, count, 8);
    std::uint8_t enc[32];
    for (const Fr& x : public_input) {
        ff::field_to_bytes(x, enc);
        append(material, enc, 32);
    }
    return crypto::sha256(material);
}

void write_file(const std::filesystem::path& path, const Bytes& data) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (f == nullptr) throw std::runtime_error("cannot open file for writing: " + path.string());
    if (!data.empty() && std::fwrite(data.data(), 1, data.size(), f) != data.size()) {
        std::fclose(f);
        throw std::runtime_error("short write: " + path.string());
    }
    std::fclose(f);
}

Bytes read_file(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (f == nullptr) throw std::runtime_error("cannot open file for reading: " + path.string());
    std::fseek(f, 0, SEEK_END);
    const long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    Bytes data(size > 0 ? static_cast<std::size_t>(size) : 0);
    if (!data.empty() && std::fread(data.data(), 1, data.size(), f) != data.size()) {
        std::fclose(f);
        throw std::runtime_error("short read: " + path.string());
    }
    std::fclose(f);
    return data;
}

}  // namespace

Bytes DirectBackend::setup(const r1cs::ConstraintSystem& cs,
                           const crypto::HashDigest& circuit_digest, const Bytes& srs_seed,
                           const std::filesystem::path& pk_path) {
    const crypto::HashDigest key = direct_key(srs_seed, circuit_digest);

    Bytes pk;
    append(pk, reinterpret_cast<const std::uint8_t*>(kDirectPkMagic), 8);
    append(pk, circuit_digest.data(), circuit_digest.size());
    append(pk, key.data(), key.size());
    write_file(pk_path, pk);

    Bytes payload;
    payload.push_back(static_cast<std::uint8_t>(cs.num_public() & 0xff));
    payload.push_back(static_cast<std::uint8_t>((cs.num_public() >> 8) & 0xff));
    payload.push_back(static_cast<std::uint8_t>((cs.num_public() >> 16) & 0xff));
    payload.push_back(static_cast<std::uint8_t>((cs.num_public() >> 24) & 0xff));
    append(payload, key.data(), key.size());
    return make_container(kVkMagic, BackendId::Direct, circuit_digest, payload);
}

Bytes DirectBackend::prove(const r1cs::ConstraintSystem& cs, const std::filesystem::path& pk_path,
                           const std::vector<Fr>& assignment) {
    if (!cs.satisfied(assignment))
        throw std::runtime_error("assignment does not satisfy the constraint system");

    const Bytes pk = read_file(pk_path);
    if (pk.size() != 8 + 32 + 32 || std::memcmp(pk.data(), kDirectPkMagic, 8) != 0)
        throw std::runtime_error("malformed direct proving key: " + pk_path.string());
    crypto::HashDigest digest;
    std::memcpy(digest.data(), pk.data() + 8, 32);

    std::vector<Fr> public_input(assignment.begin() + 1,
                                 assignment.begin() + 1 + cs.num_public());
    const crypto::HashDigest tag = direct_tag(pk.data() + 40, digest, public_input);
    return make_container(kProofMagic, BackendId::Direct, digest, crypto::digest_bytes(tag));
}

bool DirectBackend::verify(const Bytes& vk, const std::vector<Fr>& public_input,
                           const Bytes& proof) {
    const auto vk_view = parse_container(vk, kVkMagic);
    const auto pf_view = parse_container(proof, kProofMagic);
    if (!vk_view || !pf_view) return false;
    if (vk_view->backend != BackendId::Direct || pf_view->backend != BackendId::Direct)
        return false;
    if (vk_view->circuit_digest != pf_view->circuit_digest) return false;
    if (vk_view->payload_size != 4 + 32 || pf_view->payload_size != 32) return false;

    const std::uint32_t num_public = static_cast<std::uint32_t>(vk_view->payload[0]) |
                                     (static_cast<std::uint32_t>(vk_view->payload[1]) << 8) |
                                     (static_cast<std::uint32_t>(vk_view->payload[2]) << 16) |
                                     (static_cast<std::uint32_t>(vk_view->payload[3]) << 24);
    if (public_input.size() != num_public) return false;

    const crypto::HashDigest tag =
        direct_tag(vk_view->payload + 4, vk_view->circuit_digest, public_input);
    return std::memcmp(tag.data(), pf_view->payload, 32) == 0;
}

// ===== Backend registry =====

std::unique_ptr<Backend> make_backend(const std::string& name) {
    if (name == "direct") return std::make_unique<DirectBackend>();
    if (name == "groth16") return std::make_unique<Groth16Backend>();
    throw std::invalid_argument("unknown proof backend: " + name);
}

std::optional<BackendId> vk_backend(const Bytes& vk) {
    const auto view = parse_container(vk, kVkMagic);
    if (!view) return std::nullopt;
    return view->backend;
}

bool zk_verify(const Bytes& vk, const std::vector<Fr>& public_input, const Bytes& proof) {
    const auto backend_id = vk_backend(vk);
    if (!backend_id) return false;
    switch (*backend_id) {
        case BackendId::Direct:
            return DirectBackend().verify(vk, public_input, proof);
        case BackendId::Succinct:
            return Groth16Backend().verify(vk, public_input, proof);
    }
    return false;
}

Bytes default_srs_seed() { return bytes_of("zkperm-reference-srs-seed-v1"); }

}  // namespace proofsys
}  // namespace zkperm
