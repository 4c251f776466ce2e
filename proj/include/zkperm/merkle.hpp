#pragma once

#include <vector>

#include "zkperm/sha256.hpp"

namespace zkperm {
namespace crypto {

// ===== Merkle trees =====
//
// Binary SHA-256 tree of fixed depth. Short leaf lists are padded with the
// all-zero digest, so the root depends only on (depth, occupied leaves).

struct MerklePath {
    std::size_t leaf_index = 0;
    // (sibling digest, sibling-is-right flag), one per level, leaf upward
    std::vector<std::pair<HashDigest, bool>> siblings;
};

class MerkleTree {
  public:
    MerkleTree(std::vector<HashDigest> leaves, unsigned depth);

    unsigned depth() const { return depth_; }
    const HashDigest& root() const { return levels_.back()[0]; }
    const std::vector<HashDigest>& leaves() const { return levels_[0]; }

    MerklePath path(std::size_t leaf_index) const;

  private:
    unsigned depth_;
    // levels_[0] = padded leaves; levels_[depth] = [root]
    std::vector<std::vector<HashDigest>> levels_;
};

HashDigest merkle_node(const HashDigest& left, const HashDigest& right);

bool merkle_path_verify(const HashDigest& root, const HashDigest& leaf, const MerklePath& path);

}  // namespace crypto
}  // namespace zkperm
