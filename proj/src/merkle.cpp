#include "zkperm/merkle.hpp"

#include <stdexcept>

namespace zkperm {
namespace crypto {

HashDigest merkle_node(const HashDigest& left, const HashDigest& right) {
    Bytes buf;
    buf.reserve(64);
    append(buf, left.data(), left.size());
    append(buf, right.data(), right.size());
    return sha256(buf);
}

MerkleTree::MerkleTree(std::vector<HashDigest> leaves, unsigned depth) : depth_(depth) {
    if (depth < 1 || depth > 30) throw std::invalid_argument("merkle depth out of range");
    std::size_t capacity = (std::size_t)1 << depth;
    if (leaves.empty() || leaves.size() > capacity)
        throw std::invalid_argument("leaf count exceeds tree capacity");
    leaves.resize(capacity, HashDigest{});

    levels_.push_back(std::move(leaves));
    for (unsigned level = 0; level < depth; ++level) {
        const auto& below = levels_[level];
        std::vector<HashDigest> above(below.size() / 2);
        for (std::size_t i = 0; i < above.size(); ++i)
            above[i] = merkle_node(below[2 * i], below[2 * i + 1]);
        levels_.push_back(std::move(above));
    }
}

MerklePath MerkleTree::path(std::size_t leaf_index) const {
    if (leaf_index >= levels_[0].size()) throw std::invalid_argument("leaf index out of range");
    MerklePath p;
    p.leaf_index = leaf_index;
    std::size_t idx = leaf_index;
    for (unsigned level = 0; level < depth_; ++level) {
        bool sibling_is_right = (idx % 2 == 0);
        std::size_t sib = sibling_is_right ? idx + 1 : idx - 1;
        p.siblings.emplace_back(levels_[level][sib], sibling_is_right);
        idx /= 2;
    }
    return p;
}

bool merkle_path_verify(const HashDigest& root, const HashDigest& leaf, const MerklePath& path) {
    HashDigest acc = leaf;
    for (const auto& [sibling, sibling_is_right] : path.siblings) {
        acc = sibling_is_right ? merkle_node(acc, sibling) : merkle_node(sibling, acc);
    }
    return acc == root;
}

}  // namespace crypto
}  // namespace zkperm
