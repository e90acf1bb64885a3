#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "weakdl/errors.hpp"
#include "weakdl/modarith.hpp"

using namespace weakdl;

namespace {
const Int kSecpOrder(
    "115792089237316195423570985008687907852837564279074904382605163141518161494337");
const Int kSect1Alpha(
    "64826877121840101682523629462674967702937679580369334126295633893540044112329");
}  // namespace

TEST_CASE("prime modulus construction") {
    CHECK_NOTHROW(PrimeModulus{Int(13)});
    CHECK_NOTHROW(PrimeModulus{kSecpOrder});
    CHECK_THROWS_AS(PrimeModulus{Int(12)}, NotPrime);
    CHECK_THROWS_AS(PrimeModulus{Int(1)}, NotPrime);
}

TEST_CASE("pow_mod basics") {
    PrimeModulus p13(Int(13));
    CHECK(pow_mod(2, 12, p13) == 1);  // 4096 mod 13
    CHECK(pow_mod(2, 0, p13) == 1);
    CHECK(pow_mod(5, 0, p13) == 1);
    CHECK_THROWS_AS(pow_mod(-1, 3, p13), OutOfRange);
}

TEST_CASE("order-4 generator of the big curve group exponent field") {
    PrimeModulus m(kSecpOrder);
    Int z4 = pow_mod(7, (kSecpOrder - 1) / 4, m);
    CHECK(pow_mod(z4, 2, m) == kSecpOrder - 1);
    CHECK(pow_mod(z4, 4, m) == 1);
    CHECK(pow_mod(z4, 3, m) == kSect1Alpha);
}

TEST_CASE("fermat property on random elements") {
    PrimeModulus m(Int(1009));
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, 42);
    for (int i = 0; i < 200; ++i) {
        Int x;
        mpz_urandomm(x.get_mpz_t(), rs, Int(1008).get_mpz_t());
        x += 1;
        CHECK(pow_mod(x, 1008, m) == 1);
    }
    gmp_randclear(rs);
}

TEST_CASE("subgroup generators") {
    PrimeModulus m(Int(1009));  // 1008 = 2^4 * 3^2 * 7

    SUBCASE("d = 1 is the trivial subgroup") {
        auto ctx = subgroup_generator(m, 1, {});
        CHECK(ctx.zeta == 1);
    }
    SUBCASE("d = 2 gives p-1") {
        auto ctx = subgroup_generator(m, 2, {{Int(2), 1u}});
        CHECK(ctx.zeta == 1008);
    }
    SUBCASE("exact order for every divisor of p-1") {
        for (uint64_t d : oracles::divisors_brute(1008, 1008)) {
            auto f = oracles::factor_brute(d);
            std::vector<std::pair<Int, unsigned>> df(f.begin(), f.end());
            auto ctx = subgroup_generator(m, Int((unsigned long)d), df);
            CHECK(oracles::order_brute(ctx.zeta.get_ui(), 1009) == d);
        }
    }
    SUBCASE("rejects non-divisors and bad factorizations") {
        CHECK_THROWS_AS(subgroup_generator(m, 5, {{Int(5), 1u}}), NotADivisor);
        CHECK_THROWS_AS(subgroup_generator(m, 6, {{Int(6), 1u}}), BadFactorization);
        CHECK_THROWS_AS(subgroup_generator(m, 6, {{Int(2), 1u}}), BadFactorization);
    }
}

TEST_CASE("order-4 generator on the big group") {
    PrimeModulus m(kSecpOrder);
    auto ctx = subgroup_generator(m, 4, {{Int(2), 2u}});
    CHECK(pow_mod(ctx.zeta, 2, m) == kSecpOrder - 1);  // unique order-2 element
    CHECK(pow_mod(ctx.zeta, 4, m) == 1);
    CHECK(pow_mod(ctx.zeta, 1, m) != 1);
}

TEST_CASE("multiplicative order") {
    PrimeModulus m(kSecpOrder);
    PartialFactorization f = factor_bounded(kSecpOrder - 1);

    CHECK(*multiplicative_order(1, m, f).order == 1);
    CHECK(*multiplicative_order(kSecpOrder - 1, m, f).order == 2);
    CHECK(*multiplicative_order(kSect1Alpha, m, f).order == 4);
    CHECK_THROWS_AS(multiplicative_order(0, m, f), OutOfRange);
    CHECK_THROWS_AS(multiplicative_order(kSecpOrder, m, f), OutOfRange);
}

TEST_CASE("order matches brute force for small p") {
    for (uint64_t p : {13ull, 1009ull, 9973ull}) {
        PrimeModulus m(Int((unsigned long)p));
        PartialFactorization f = factor_bounded(Int((unsigned long)(p - 1)));
        for (uint64_t a = 1; a < p; a += (p > 100 ? 7 : 1)) {
            auto r = multiplicative_order(Int((unsigned long)a), m, f);
            REQUIRE(r.order.has_value());
            CHECK(r.order->get_ui() == oracles::order_brute(a, p));
            // returned order divides p-1 and witnesses the defining property
            CHECK(mpz_divisible_p(Int((unsigned long)(p - 1)).get_mpz_t(),
                                  r.order->get_mpz_t()));
        }
    }
}

TEST_CASE("order is exact even with an incomplete factorization") {
    // secp256k1 p-1 with only the small factors known; the composite cofactor
    // must be discharged as a block for subgroup members
    PrimeModulus m(kSecpOrder);
    EffortBudget tiny;
    tiny.rho_iterations = 10;  // keeps the two large primes unsplit
    PartialFactorization f = factor_bounded(kSecpOrder - 1, tiny);
    REQUIRE_FALSE(f.complete());

    CHECK(*multiplicative_order(kSect1Alpha, m, f).order == 4);

    // an element of full order cannot be pinned down
    auto r = multiplicative_order(5, m, f);
    CHECK_FALSE(r.order.has_value());
    CHECK(pow_mod(5, r.order_divides, m) == 1);
}
