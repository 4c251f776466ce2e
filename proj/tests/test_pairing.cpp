#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zkperm/pairing.hpp"

using namespace zkperm::ff;
using namespace zkperm::ec;


namespace {

Fr scalar(u64 v) { return Fr::from_u64(v); }

}  // namespace

TEST_CASE("pairing is nondegenerate") {
    Fq12 e = pairing(g1_generator(), g2_generator());
    CHECK_FALSE(e == Fq12::one());
    CHECK_FALSE(e.is_zero());
    // the target value lies in the order-r subgroup of Fq12
    CHECK(e.pow(std::span<const u64>(FrParams::modulus.data(), 4)) == Fq12::one());
}

TEST_CASE("bilinearity in both arguments") {
    G1Affine p = g1_generator();
    G2Affine q = g2_generator();

    u64 a = 1234577, b = 9876541;
    G1Affine ap = g1_mul(p, scalar(a)).to_affine();
    G2Affine bq = g2_mul(q, scalar(b)).to_affine();

    Fq12 base = pairing(p, q);
    Fq12 lhs = pairing(ap, bq);
    Fq12 rhs = base.pow(scalar(a * b).to_limbs());
    CHECK(lhs == rhs);

    // e(aP, Q) = e(P, aQ)
    CHECK(pairing(ap, q) == pairing(p, g2_mul(q, scalar(a)).to_affine()));
}

TEST_CASE("multiplicativity") {
    G1Affine p = g1_generator();
    G2Affine q = g2_generator();
    G1Affine p2 = g1_mul(p, scalar(31337)).to_affine();

    Fq12 sum = pairing(G1::from_affine(p).madd(p2).to_affine(), q);
    CHECK(sum == pairing(p, q) * pairing(p2, q));
}

TEST_CASE("inverse pairs cancel") {
    G1Affine p = g1_mul(g1_generator(), scalar(271828)).to_affine();
    G2Affine q = g2_mul(g2_generator(), scalar(141421)).to_affine();
    G1Affine np = p;
    np.y = -np.y;
    CHECK(pairing(p, q) * pairing(np, q) == Fq12::one());
}

TEST_CASE("infinity maps to one") {
    G1Affine inf1;
    inf1.infinity = true;
    G2Affine inf2;
    inf2.infinity = true;
    CHECK(pairing(inf1, g2_generator()) == Fq12::one());
    CHECK(pairing(g1_generator(), inf2) == Fq12::one());
}

TEST_CASE("product of pairings with shared final exponentiation") {
    G1Affine p = g1_generator();
    G2Affine q = g2_generator();
    G1Affine a = g1_mul(p, scalar(17)).to_affine();
    G2Affine b = g2_mul(q, scalar(23)).to_affine();
    G1Affine c = g1_mul(p, scalar(101)).to_affine();
    G2Affine d = g2_mul(q, scalar(7)).to_affine();

    Fq12 prod = pairing_product({{a, b}, {c, d}});
    Fq12 expect = pairing(p, q).pow(scalar(17 * 23 + 101 * 7).to_limbs());
    CHECK(prod == expect);

    // a Groth16-shaped identity: e(xP, Q) * e(-P, xQ) = 1
    u64 x = 5550123;
    G1Affine xp = g1_mul(p, scalar(x)).to_affine();
    G2Affine xq = g2_mul(q, scalar(x)).to_affine();
    G1Affine npg = p;
    npg.y = -npg.y;
    CHECK(pairing_product({{xp, q}, {npg, xq}}) == Fq12::one());
}
