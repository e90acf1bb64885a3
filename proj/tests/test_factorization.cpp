#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "weakdl/errors.hpp"
#include "weakdl/factorization.hpp"

using namespace weakdl;

namespace {
const Int kSecpOrder(
    "115792089237316195423570985008687907852837564279074904382605163141518161494337");

PartialFactorization secp_pm1_full() {
    PartialFactorization f = factor_bounded(kSecpOrder - 1);
    return apply_hints(f, parse_hint_file(std::string(WEAKDL_DATA_DIR) + "/hints/secp256k1.txt"));
}
}  // namespace

TEST_CASE("factor small numbers") {
    auto f = factor_bounded(12);
    REQUIRE(f.known.size() == 2);
    CHECK(f.known[0] == std::pair<Int, unsigned>{2, 2u});
    CHECK(f.known[1] == std::pair<Int, unsigned>{3, 1u});
    CHECK(f.cofactor == 1);
    CHECK(f.status == CofactorStatus::one);

    auto g = factor_bounded(1008);  // p-1 for p = 1009
    CHECK(g.known == std::vector<std::pair<Int, unsigned>>{{2, 4u}, {3, 2u}, {7, 1u}});

    CHECK(factor_bounded(1).known.empty());
    CHECK(factor_bounded(1).complete());
}

TEST_CASE("product identity and sieve agreement for random n") {
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, 7);
    for (int i = 0; i < 200; ++i) {
        Int n;
        mpz_urandomm(n.get_mpz_t(), rs, Int(999'983).get_mpz_t());
        n += 2;
        auto f = factor_bounded(n);
        CHECK(f.reassemble() == n);
        CHECK(f.complete());  // every n <= 10^6 splits by trial division
        auto expect = oracles::factor_brute(n.get_ui());
        REQUIRE(f.known.size() == expect.size());
        for (const auto& [p, e] : f.known) CHECK(expect.at(p.get_ui()) == e);
    }
    gmp_randclear(rs);
}

TEST_CASE("curve group order minus one contains the documented small factors") {
    auto f = factor_bounded(kSecpOrder - 1);
    bool has2 = false, has3 = false;
    for (const auto& [p, e] : f.known) {
        if (p == 2) {
            has2 = true;
            CHECK(e >= 2);  // divisor 4 exists
        }
        if (p == 3) has3 = true;
    }
    CHECK(has2);
    CHECK(has3);
    CHECK(f.reassemble() == kSecpOrder - 1);
}

TEST_CASE("rho splits medium semiprimes deterministically") {
    Int n = Int("1002328039319") * Int("187019741");
    EffortBudget e;
    e.rho_iterations = 20'000'000;
    auto f1 = factor_bounded(n, e);
    auto f2 = factor_bounded(n, e);
    REQUIRE(f1.complete());
    CHECK(f1.known == f2.known);  // fixed seed, same result
    CHECK(f1.known.size() == 2);
}

TEST_CASE("effort monotonicity never loses factors") {
    Int n = Int("6700417") * Int("2147483647") * 8;
    EffortBudget lo, hi;
    lo.rho_iterations = 2'000;
    hi.rho_iterations = 50'000'000;
    auto flo = factor_bounded(n, lo);
    auto fhi = factor_bounded(n, hi);
    for (const auto& [p, e] : flo.known) {
        bool found = false;
        for (const auto& [q, e2] : fhi.known)
            if (p == q && e2 >= e) found = true;
        CHECK(found);
    }
}

TEST_CASE("divisor enumeration") {
    SUBCASE("factor(12) up to 6") {
        auto ds = divisors_up_to(factor_bounded(12), 6);
        CHECK(ds.divisors == std::vector<Int>{1, 2, 3, 4, 6});
        CHECK(ds.complete);
    }
    SUBCASE("group-order example up to 48") {
        auto ds = divisors_up_to(secp_pm1_full(), 48);
        CHECK(ds.divisors == std::vector<Int>{1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48});
    }
    SUBCASE("1008 up to 20 matches a brute scan") {
        auto ds = divisors_up_to(factor_bounded(1008), 20);
        auto expect = oracles::divisors_brute(1008, 20);
        REQUIRE(ds.divisors.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i) CHECK(ds.divisors[i].get_ui() == expect[i]);
        CHECK(ds.divisors == std::vector<Int>{1, 2, 3, 4, 6, 7, 8, 9, 12, 14, 16, 18});
    }
    SUBCASE("incomplete cofactor clears the flag beyond the trial bound") {
        EffortBudget tiny;
        tiny.rho_iterations = 10;
        auto f = factor_bounded(kSecpOrder - 1, tiny);
        REQUIRE_FALSE(f.complete());
        CHECK(divisors_up_to(f, 1'000'000).complete);       // trial bound covers it
        CHECK_FALSE(divisors_up_to(f, Int(1) << 60).complete);
    }
}

TEST_CASE("divisor-maximal reduction") {
    SUBCASE("the 48-bound example") {
        auto red = reduce_divisor_set(divisors_up_to(secp_pm1_full(), 48));
        CHECK(red.divisors == std::vector<Int>{32, 48});
    }
    SUBCASE("singleton") {
        auto red = reduce_divisor_set(divisors_up_to(factor_bounded(12), 1));
        CHECK(red.divisors == std::vector<Int>{1});
    }
    SUBCASE("1008 up to 20") {
        auto red = reduce_divisor_set(divisors_up_to(factor_bounded(1008), 20));
        CHECK(red.divisors == std::vector<Int>{12, 14, 16, 18});
    }
    SUBCASE("reduction properties on random inputs") {
        gmp_randstate_t rs;
        gmp_randinit_mt(rs);
        gmp_randseed_ui(rs, 11);
        for (int iter = 0; iter < 50; ++iter) {
            Int n;
            mpz_urandomm(n.get_mpz_t(), rs, Int(720'720).get_mpz_t());
            n += 2;
            uint64_t bound = 1 + (iter * 37) % 5000;
            auto ds = divisors_up_to(factor_bounded(n), bound);
            auto red = reduce_divisor_set(ds);
            // matches the brute pairwise filter
            std::vector<uint64_t> divs;
            for (const auto& d : ds.divisors) divs.push_back(d.get_ui());
            auto expect = oracles::maximal_brute(divs);
            REQUIRE(red.divisors.size() == expect.size());
            for (size_t i = 0; i < expect.size(); ++i)
                CHECK(red.divisors[i].get_ui() == expect[i]);
            // every divisor divides some element of the result
            for (const auto& d : ds.divisors) {
                bool covered = false;
                for (const auto& e : red.divisors)
                    if (mpz_divisible_p(e.get_mpz_t(), d.get_mpz_t())) covered = true;
                CHECK(covered);
            }
            // no result element divides another
            for (const auto& a : red.divisors)
                for (const auto& b : red.divisors)
                    if (a != b) CHECK_FALSE(mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()));
        }
        gmp_randclear(rs);
    }
}

TEST_CASE("weak-key counts") {
    SUBCASE("p = 13, bound 6 counts eight weak elements") {
        auto f = factor_bounded(12);
        CHECK(weak_key_count(f, 6) == 8);
        CHECK(weak_key_count_log2(f, 6) == doctest::Approx(3.0));
        CHECK(oracles::weak_count_brute(13, 6) == 8);
    }
    SUBCASE("bound 1 counts only alpha = 1") {
        CHECK(weak_key_count_log2(factor_bounded(12), 1) == doctest::Approx(0.0));
        CHECK(weak_key_count_log2(secp_pm1_full(), 1) == doctest::Approx(0.0));
    }
    SUBCASE("brute-force equality for small p") {
        for (uint64_t p : {13ull, 1009ull, 9973ull}) {
            auto f = factor_bounded(Int((unsigned long)(p - 1)));
            for (uint64_t b : std::vector<uint64_t>{1, 2, 6, 48, p - 1}) {
                CHECK(weak_key_count(f, Int((unsigned long)b)).get_ui() ==
                      oracles::weak_count_brute(p, b));
            }
        }
    }
    SUBCASE("full sum telescopes to p-1") {
        auto f = factor_bounded(1008);
        CHECK(weak_key_count(f, 1008) == 1008);
    }
}

TEST_CASE("test-cost values") {
    auto f = secp_pm1_full();
    // R = {4}: log2(2 * 2) = 2
    CHECK(test_cost_log2(factor_bounded(4), 4) == doctest::Approx(2.0));
    CHECK(weak_key_count_log2(f, Int(1) << 32) == doctest::Approx(24.1).epsilon(0.002));
    CHECK(test_cost_log2(f, Int(1) << 32) == doctest::Approx(13.1).epsilon(0.004));
}

TEST_CASE("weak-key count is monotone in the bound") {
    auto f = secp_pm1_full();
    double n_prev = -1;
    for (unsigned bits : {1u, 8u, 16u, 32u, 48u, 64u, 100u, 128u, 160u}) {
        double n = weak_key_count_log2(f, Int(1) << bits);
        CHECK(n >= n_prev);
        n_prev = n;
    }
}

TEST_CASE("hint files") {
    SUBCASE("shipped hint file completes the factorization") {
        auto f = secp_pm1_full();
        CHECK(f.complete());
        CHECK(f.reassemble() == kSecpOrder - 1);
        Int largest = f.known.back().first;
        CHECK(bit_length(largest) == 109);
    }
    SUBCASE("bad hints are rejected") {
        auto f = factor_bounded(kSecpOrder - 1, {1'000'000, 10, 1});
        CHECK_THROWS_AS(apply_hints(f, {{Int(4), 1u}}), BadFactorization);
    }
    SUBCASE("hint parse errors carry line info") {
        std::string path = "/tmp/weakdl_bad_hints.txt";
        std::ofstream(path) << "149\nnot-a-number\n";
        CHECK_THROWS_AS(parse_hint_file(path), ParseError);
        std::remove(path.c_str());
    }
}

TEST_CASE("factor_over_known splits divisors") {
    auto f = factor_bounded(1008);
    auto d = factor_over_known(72, f);
    CHECK(d == std::vector<std::pair<Int, unsigned>>{{2, 3u}, {3, 2u}});
    CHECK_THROWS_AS(factor_over_known(5, f), BadFactorization);
}
