#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "zkperm/eddsa.hpp"
#include "zkperm/merkle.hpp"
#include "zkperm/sha256.hpp"

using namespace zkperm;
using namespace zkperm::crypto;

// ===== SHA-256 =====

TEST_CASE("sha256 standard vectors") {
    CHECK(digest_hex(sha256(Bytes{})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(digest_hex(sha256(bytes_of("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(digest_hex(sha256(bytes_of("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // exactly one block of 'a' padding boundary
    CHECK(digest_hex(sha256(Bytes(64, 'a'))) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
    CHECK(digest_hex(sha256(Bytes(1000000, 'a'))) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 incremental equals one-shot at every split") {
    const Bytes msg = bytes_of("the quick brown fox jumps over the lazy dog, twice over");
    const HashDigest want = sha256(msg);
    for (std::size_t split = 0; split <= msg.size(); ++split) {
        Sha256 h;
        h.update(msg.data(), split);
        h.update(msg.data() + split, msg.size() - split);
        CHECK(h.finish() == want);
    }
}

// ===== Signatures =====

TEST_CASE("sign and verify round trip") {
    const auto kp = ds_keygen(bytes_of("signer"));
    const Bytes msg = bytes_of("approve transfer 42");
    const Signature sig = ds_sign(kp.secret_key, msg);
    CHECK(ds_verify(kp.public_key, sig, msg));
    CHECK(ds_verify_digest(kp.public_key, sig, hash_canonical(msg)));
    CHECK_FALSE(ds_verify(kp.public_key, sig, bytes_of("approve transfer 43")));
    const auto other = ds_keygen(bytes_of("someone else"));
    CHECK_FALSE(ds_verify(other.public_key, sig, msg));
}

TEST_CASE("signing is deterministic per key and message") {
    const auto kp = ds_keygen(bytes_of("determinism"));
    const Bytes msg = bytes_of("same message");
    const Signature a = ds_sign(kp.secret_key, msg);
    const Signature b = ds_sign(kp.secret_key, msg);
    CHECK(a.commitment_point == b.commitment_point);
    CHECK(a.response_scalar == b.response_scalar);
    const Signature c = ds_sign(kp.secret_key, bytes_of("different message"));
    CHECK(a.commitment_point != c.commitment_point);
}

TEST_CASE("mutated signatures are rejected") {
    const auto kp = ds_keygen(bytes_of("mutation target"));
    const Bytes msg = bytes_of("message under test");
    const Signature sig = ds_sign(kp.secret_key, msg);
    const Bytes enc = signature_to_bytes(sig);
    REQUIRE(enc.size() == 64);

    std::mt19937_64 rng(0xc0ffee);
    int rejected = 0, trials = 0;
    for (int i = 0; i < 1000; ++i) {
        Bytes mut = enc;
        mut[rng() % mut.size()] ^= (std::uint8_t)(1u << (rng() % 8));
        Signature parsed;
        try {
            parsed = signature_from_bytes(mut);
        } catch (const std::invalid_argument&) {
            ++rejected;  // not even a decodable point/scalar
            ++trials;
            continue;
        }
        ++trials;
        if (!ds_verify(kp.public_key, parsed, msg)) ++rejected;
    }
    CHECK(trials == 1000);
    CHECK(rejected == 1000);
}

TEST_CASE("serialization round trips and rejects junk") {
    const auto kp = ds_keygen(bytes_of("serialization"));
    const Signature sig = ds_sign(kp.secret_key, bytes_of("x"));
    CHECK(signature_from_bytes(signature_to_bytes(sig)).commitment_point ==
          sig.commitment_point);
    CHECK(public_key_from_bytes(public_key_to_bytes(kp.public_key)) == kp.public_key);
    CHECK_THROWS_AS((void)signature_from_bytes(Bytes(63, 0)), std::invalid_argument);
    CHECK_THROWS_AS((void)public_key_from_bytes(Bytes(31, 0)), std::invalid_argument);
    Bytes not_a_point(32, 0xff);
    CHECK_THROWS_AS((void)public_key_from_bytes(not_a_point), std::invalid_argument);
}

TEST_CASE("challenge binds both points and the digest") {
    const auto k1 = ds_keygen(bytes_of("a"));
    const auto k2 = ds_keygen(bytes_of("b"));
    const HashDigest d1 = hash_canonical(bytes_of("m1"));
    const HashDigest d2 = hash_canonical(bytes_of("m2"));
    const auto base = eddsa_challenge(k1.public_key, k2.public_key, d1);
    CHECK(base != eddsa_challenge(k2.public_key, k1.public_key, d1));
    CHECK(base != eddsa_challenge(k1.public_key, k2.public_key, d2));
}

// ===== Merkle trees =====

namespace {
HashDigest leaf_of(unsigned i) { return hash_canonical(bytes_of("leaf" + std::to_string(i))); }
}  // namespace

TEST_CASE("every path in every small tree verifies, exhaustively") {
    for (unsigned depth = 1; depth <= 3; ++depth) {
        const std::size_t cap = 1u << depth;
        for (std::size_t count = 1; count <= cap; ++count) {
            std::vector<HashDigest> leaves;
            for (std::size_t i = 0; i < count; ++i) leaves.push_back(leaf_of((unsigned)i));
            MerkleTree tree(leaves, depth);
            for (std::size_t i = 0; i < cap; ++i) {
                const MerklePath path = tree.path(i);
                CHECK(path.siblings.size() == depth);
                CHECK(merkle_path_verify(tree.root(), tree.leaves()[i], path));
                // same opening against any other leaf value must fail
                CHECK_FALSE(merkle_path_verify(tree.root(), leaf_of(99), path));
            }
        }
    }
}

TEST_CASE("root depends only on depth and occupied leaves") {
    std::vector<HashDigest> three = {leaf_of(0), leaf_of(1), leaf_of(2)};
    std::vector<HashDigest> padded = three;
    padded.push_back(HashDigest{});  // explicit zero padding
    CHECK(MerkleTree(three, 2).root() == MerkleTree(padded, 2).root());
    CHECK(MerkleTree(three, 2).root() != MerkleTree(three, 3).root());
}

TEST_CASE("node hash is position dependent") {
    const HashDigest a = leaf_of(1), b = leaf_of(2);
    CHECK(merkle_node(a, b) != merkle_node(b, a));
}

TEST_CASE("tree construction rejects overflow") {
    std::vector<HashDigest> five(5, leaf_of(0));
    CHECK_THROWS_AS(MerkleTree(five, 2), std::invalid_argument);
    CHECK_THROWS_AS(MerkleTree({}, 0), std::invalid_argument);
}

TEST_CASE("tampered paths fail verification") {
    std::vector<HashDigest> leaves = {leaf_of(0), leaf_of(1), leaf_of(2), leaf_of(3),
                                      leaf_of(4)};
    MerkleTree tree(leaves, 3);
    MerklePath path = tree.path(2);
    REQUIRE(merkle_path_verify(tree.root(), leaves[2], path));

    MerklePath wrong_sibling = path;
    wrong_sibling.siblings[1].first[0] ^= 1;
    CHECK_FALSE(merkle_path_verify(tree.root(), leaves[2], wrong_sibling));

    MerklePath wrong_side = path;
    wrong_side.siblings[0].second = !wrong_side.siblings[0].second;
    CHECK_FALSE(merkle_path_verify(tree.root(), leaves[2], wrong_side));

    MerklePath truncated = path;
    truncated.siblings.pop_back();
    CHECK_FALSE(merkle_path_verify(tree.root(), leaves[2], truncated));
}
