#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zkperm/field_tower.hpp"

#include <cstdint>

using namespace zkperm::ff;

namespace {

// small deterministic generator for property sampling
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    template <typename F>
    F field() {
        std::uint8_t bytes[32];
        for (int i = 0; i < 32; ++i) bytes[i] = (std::uint8_t)next();
        return field_from_bytes_reduce<F>(bytes);
    }
};

}  // namespace

TEST_CASE("small integer arithmetic") {
    CHECK(Fr::from_u64(7) * Fr::from_u64(6) == Fr::from_u64(42));
    CHECK(Fr::from_u64(100) - Fr::from_u64(58) == Fr::from_u64(42));
    CHECK(Fr::from_u64(0).is_zero());
    CHECK((Fr::from_u64(5) - Fr::from_u64(5)).is_zero());
    CHECK(-Fr::zero() == Fr::zero());
    CHECK(Fr::from_u64(3) + (-Fr::from_u64(3)) == Fr::zero());
}

TEST_CASE("pinned cross-implementation vectors, Fq") {
    Fq a = Fq::from_limbs({0x02115a4926f67e03ull, 0xaead3490afe99377ull,
                           0xdc8d3ad8b47cf081ull, 0x2dc19c5b3346b79bull});
    Fq b = Fq::from_limbs({0xab2bea55109c2bc6ull, 0x9bdde98ab25a2664ull,
                           0x139052e799eb56b5ull, 0x1e2d862d8469b0d0ull});
    CHECK((a + b).to_limbs() == Limbs{0x711cb8875f15ac82ull, 0xb309b389f9d1ef4eull,
                                      0x37cd4809cce6eed9ull, 0x1b8ad415d67ec842ull});
    CHECK((a * b).to_limbs() == Limbs{0x8278e7bd925217e4ull, 0x0d0088093cb66cd3ull,
                                      0x273c333e1adc73dcull, 0x0e203338828b95c4ull});
    CHECK(a.inverse().to_limbs() == Limbs{0xbaea27e58f758766ull, 0x5b88cea53f2c60b9ull,
                                          0x071f351396e5fb9eull, 0x22b121601ecf98d2ull});
    CHECK(a.pow(b.to_limbs()).to_limbs() ==
          Limbs{0xd8d48eefb17fa022ull, 0xf5cde8336550560eull,
                0x46c9871c40e92016ull, 0x1be780d6332e56f9ull});
}

TEST_CASE("pinned cross-implementation vectors, Fr") {
    Fr a = Fr::from_limbs({0xeacd1dd1e06d75d5ull, 0xfc95bb6b7c12a16aull,
                           0xdc8d3ad8b47cf082ull, 0x2dc19c5b3346b79bull});
    Fr b = Fr::from_limbs({0x8c264460b29020deull, 0x5913f2ae6d3b8e54ull,
                           0x139052e799eb56b7ull, 0x1e2d862d8469b0d0ull});
    CHECK((a + b).to_limbs() == Limbs{0x33116c9ea2fd96b2ull, 0x2d75c5d16f94bf2eull,
                                      0x37cd4809cce6eeddull, 0x1b8ad415d67ec842ull});
    CHECK((a * b).to_limbs() == Limbs{0x756a49c17d109fd6ull, 0x7035dba104dd0d69ull,
                                      0x96968fa83c023404ull, 0x11bef7ea12d0558cull});
    CHECK(a.inverse().to_limbs() == Limbs{0xc2af7913a6c03e85ull, 0x5f60920e6a847c7full,
                                          0xf73352a3195972a0ull, 0x110017955ef5c642ull});
    CHECK(a.pow(b.to_limbs()).to_limbs() ==
          Limbs{0xddb705e2ee8131b4ull, 0xfdfdbbfb8504ec85ull,
                0x9bb6b2eb2041ab1full, 0x2a10c46224d8820dull});
}

TEST_CASE("field properties hold on random samples") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        Fr a = rng.field<Fr>(), b = rng.field<Fr>(), c = rng.field<Fr>();
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a - b) + b == a);
        if (!a.is_zero()) CHECK(a * a.inverse() == Fr::one());
        CHECK(a.square() == a * a);
    }
    for (int i = 0; i < 50; ++i) {
        Fq a = rng.field<Fq>();
        if (!a.is_zero()) CHECK(a * a.inverse() == Fq::one());
    }
}

TEST_CASE("square roots") {
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        Fq a = rng.field<Fq>();
        Fq root;
        REQUIRE(fq_sqrt(a.square(), root));
        CHECK(root.square() == a.square());

        Fr b = rng.field<Fr>();
        Fr rroot;
        REQUIRE(fr_sqrt(b.square(), rroot));
        CHECK(rroot.square() == b.square());
    }
    // 5 generates the full 2-Sylow component, so it is a non-square mod r
    Fr none;
    CHECK_FALSE(fr_sqrt(Fr::from_u64(5), none));
}

TEST_CASE("roots of unity") {
    for (unsigned k : {1u, 2u, 10u, 28u}) {
        Fr w = fr_root_of_unity(k);
        Fr acc = w;
        // w^(2^(k-1)) must be -1, w^(2^k) must be 1
        for (unsigned i = 1; i < k; ++i) acc = acc.square();
        CHECK(acc == -Fr::one());
        CHECK(acc.square() == Fr::one());
    }
    CHECK_THROWS_AS(fr_root_of_unity(29), std::invalid_argument);
}

TEST_CASE("byte encodings") {
    Rng rng(99);
    for (int i = 0; i < 30; ++i) {
        Fr a = rng.field<Fr>();
        std::uint8_t buf[32];
        field_to_bytes(a, buf);
        CHECK(field_from_bytes_strict<Fr>(buf) == a);
    }
    // all-0xff exceeds both moduli
    std::uint8_t big[32];
    for (auto& x : big) x = 0xff;
    CHECK_THROWS_AS(field_from_bytes_strict<Fr>(big), std::invalid_argument);
    CHECK_THROWS_AS(field_from_bytes_strict<Fq>(big), std::invalid_argument);
}

TEST_CASE("tower arithmetic") {
    Rng rng(1234);
    auto rand2 = [&] { return Fq2{rng.field<Fq>(), rng.field<Fq>()}; };
    for (int i = 0; i < 30; ++i) {
        Fq2 a = rand2(), b = rand2();
        CHECK(a * b == b * a);
        CHECK(a.square() == a * a);
        if (!a.is_zero()) CHECK(a * a.inverse() == Fq2::one());
    }
    auto rand6 = [&] { return Fq6{rand2(), rand2(), rand2()}; };
    for (int i = 0; i < 15; ++i) {
        Fq6 a = rand6(), b = rand6(), c = rand6();
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        if (!a.is_zero()) CHECK(a * a.inverse() == Fq6::one());
        CHECK(a * Fq6{Fq2::zero(), Fq2::one(), Fq2::zero()} == a.mul_by_v());
    }
    auto rand12 = [&] { return Fq12{rand6(), rand6()}; };
    for (int i = 0; i < 10; ++i) {
        Fq12 a = rand12(), b = rand12();
        CHECK(a * b == b * a);
        CHECK(a.square() == a * a);
        if (!a.is_zero()) CHECK(a * a.inverse() == Fq12::one());
    }
}

TEST_CASE("Frobenius is the q-power map") {
    Rng rng(5);
    Fq12 a{Fq6{Fq2{rng.field<Fq>(), rng.field<Fq>()}, Fq2{rng.field<Fq>(), rng.field<Fq>()},
               Fq2{rng.field<Fq>(), rng.field<Fq>()}},
           Fq6{Fq2{rng.field<Fq>(), rng.field<Fq>()}, Fq2{rng.field<Fq>(), rng.field<Fq>()},
               Fq2{rng.field<Fq>(), rng.field<Fq>()}}};
    Fq12 by_pow = a.pow(std::span<const u64>(FqParams::modulus.data(), 4));
    CHECK(a.frobenius() == by_pow);
    // twelve applications give the identity
    Fq12 t = a;
    for (int i = 0; i < 12; ++i) t = t.frobenius();
    CHECK(t == a);
}
