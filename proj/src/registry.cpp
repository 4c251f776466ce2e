#include "zkperm/registry.hpp"

#include <fstream>

namespace zkperm {
namespace identity {

namespace fs = std::filesystem;

static const char* kind_dir(RecordKind kind) {
    switch (kind) {
        case RecordKind::DidDocument: return "dids";
        case RecordKind::Schema: return "schemas";
        case RecordKind::VprZk: return "vprs";
    }
    throw std::invalid_argument("unknown record kind");
}

Registry::Registry(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_ / "dids");
    fs::create_directories(root_ / "schemas");
    fs::create_directories(root_ / "vprs");
}

fs::path Registry::record_path(RecordKind kind, const std::string& key) const {
    if (key.empty() || key.find('/') != std::string::npos || key.find("..") != std::string::npos)
        throw std::invalid_argument("invalid registry key: " + key);
    return root_ / kind_dir(kind) / (key + ".json");
}

void Registry::put(RecordKind kind, const std::string& key, const enc::Json& payload) {
    fs::path path = record_path(kind, key);
    if (fs::exists(path)) throw std::runtime_error("registry key already exists: " + key);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write registry record: " + path.string());
    out << payload.dump();
}

enc::Json Registry::get(RecordKind kind, const std::string& key) const {
    fs::path path = record_path(kind, key);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("registry record not found: " + key);
    enc::Json j;
    in >> j;
    return j;
}

bool Registry::has(RecordKind kind, const std::string& key) const {
    return fs::exists(record_path(kind, key));
}

}  // namespace identity
}  // namespace zkperm
