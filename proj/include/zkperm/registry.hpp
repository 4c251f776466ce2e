#pragma once

#include <filesystem>
#include <string>

#include "zkperm/encoding.hpp"

namespace zkperm {
namespace identity {

// ===== Verifiable data registry =====
//
// Append-only directory of canonical-JSON records. Three record kinds, each
// in its own subdirectory; a key can be written once and never replaced.

enum class RecordKind { DidDocument, Schema, VprZk };

class Registry {
  public:
    explicit Registry(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    // throws std::runtime_error if the key already exists
    void put(RecordKind kind, const std::string& key, const enc::Json& payload);

    enc::Json get(RecordKind kind, const std::string& key) const;
    bool has(RecordKind kind, const std::string& key) const;

  private:
    std::filesystem::path record_path(RecordKind kind, const std::string& key) const;
    std::filesystem::path root_;
};

}  // namespace identity
}  // namespace zkperm
