#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weakdl/ecgroup.hpp"
#include "weakdl/errors.hpp"

using namespace weakdl;

namespace {

GroupPoint random_point(const CurveParams& c, gmp_randstate_t rs) {
    Int k;
    mpz_urandomm(k.get_mpz_t(), rs, c.order().get_mpz_t());
    return scalar_mul(k + 1, c.generator(), c);
}

const Int kQx(
    "100760202697161893004335214126591116800117319792545458764085267675326325395621");
const Int kQy(
    "75193444318165031146359304621062797862272142296678797285916994295833810377664");
const Int kAlpha(
    "64826877121840101682523629462674967702937679580369334126295633893540044112329");

}  // namespace

TEST_CASE("registry lookups") {
    CHECK(registry_curve("secp256k1").order() ==
          Int("115792089237316195423570985008687907852837564279074904382605163141518161494337"));
    CHECK_THROWS_AS(registry_get("no-such-curve"), UnknownCurve);
    CHECK_THROWS_AS(registry_curve("Curve25519"), UnknownCurve);  // order-only entry
    CHECK(std::holds_alternative<OrderOnlyEntry>(registry_get("Curve25519")));

    const CurveParams& toy = registry_curve("toy-1");
    CHECK(toy.order() < (Int(1) << 20));
    CHECK(toy.small_field());

    // every entry has a prime order; full entries validated at load
    for (const auto& name : registry_names()) {
        const Int& p = entry_order(registry_get(name));
        CHECK(probably_prime(p));
    }
    CHECK(registry_names().size() >= 25);
    CHECK(registry_names(true).size() == 11);
}

TEST_CASE("identity and inverse behavior") {
    const CurveParams& c = registry_curve("secp256k1");
    const GroupPoint& g = c.generator();
    CHECK(add(GroupPoint::identity(), g, c) == g);
    CHECK(add(g, GroupPoint::identity(), c) == g);
    CHECK(add(g, negate(g, c), c) == GroupPoint::identity());
    CHECK(scalar_mul(1, g, c) == g);
    CHECK(scalar_mul(0, g, c) == GroupPoint::identity());
    CHECK(scalar_mul(c.order(), g, c) == GroupPoint::identity());
}

TEST_CASE("doubling matches the additive oracle") {
    for (const char* name : {"secp256k1", "P-256", "toy-1"}) {
        const CurveParams& c = registry_curve(name);
        CHECK(add(c.generator(), c.generator(), c) == scalar_mul(2, c.generator(), c));
        CHECK(oracles::repeated_add(5, c.generator(), c) == scalar_mul(5, c.generator(), c));
    }
}

TEST_CASE("group axioms on 1000 random triples per curve") {
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, 99);
    std::mt19937 pick(4711);
    for (const auto& name : registry_names(true)) {
        const CurveParams& c = registry_curve(name);
        // triples drawn from a pool so the scalar multiplications stay cheap
        std::vector<GroupPoint> pool;
        for (int i = 0; i < 60; ++i) pool.push_back(random_point(c, rs));
        pool.push_back(GroupPoint::identity());
        for (int i = 0; i < 1000; ++i) {
            const GroupPoint& a = pool[pick() % pool.size()];
            const GroupPoint& b = pool[pick() % pool.size()];
            const GroupPoint& d = pool[pick() % pool.size()];
            CHECK(add(a, b, c) == add(b, a, c));
            CHECK(add(add(a, b, c), d, c) == add(a, add(b, d, c), c));
        }
        for (const GroupPoint& a : pool)
            CHECK(add(a, negate(a, c), c) == GroupPoint::identity());
    }
    gmp_randclear(rs);
}

TEST_CASE("order annihilates the base point on every full curve") {
    for (const auto& name : registry_names(true)) {
        const CurveParams& c = registry_curve(name);
        CHECK(scalar_mul(c.order(), c.generator(), c) == GroupPoint::identity());
    }
}

TEST_CASE("toy curve scalar_mul equals repeated addition for small k") {
    const CurveParams& c = registry_curve("toy-1");
    GroupPoint acc = GroupPoint::identity();
    for (uint64_t k = 0; k < 50; ++k) {
        CHECK(scalar_mul(Int((unsigned long)k), c.generator(), c) == acc);
        acc = add(acc, c.generator(), c);
    }
}

TEST_CASE("scalar_mul distributes over addition") {
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, 5);
    const CurveParams& c = registry_curve("secp256k1");
    for (int i = 0; i < 100; ++i) {
        Int k1, k2;
        mpz_urandomm(k1.get_mpz_t(), rs, c.order().get_mpz_t());
        mpz_urandomm(k2.get_mpz_t(), rs, c.order().get_mpz_t());
        GroupPoint lhs = scalar_mul(k1 + k2, c.generator(), c);
        GroupPoint rhs =
            add(scalar_mul(k1, c.generator(), c), scalar_mul(k2, c.generator(), c), c);
        CHECK(lhs == rhs);
    }
    gmp_randclear(rs);
}

TEST_CASE("the documented multiple of the base point") {
    const CurveParams& c = registry_curve("secp256k1");
    GroupPoint q = scalar_mul(kAlpha, c.generator(), c);
    CHECK(q.x == kQx);
    CHECK(q.y == kQy);
}

TEST_CASE("fast-path ladder agrees with plain repeated addition") {
    const CurveParams& c = registry_curve("toy-1");
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, 17);
    for (int i = 0; i < 200; ++i) {
        Int k;
        mpz_urandomm(k.get_mpz_t(), rs, Int(5000).get_mpz_t());
        CHECK(scalar_mul(k, c.generator(), c) ==
              oracles::repeated_add(k.get_ui(), c.generator(), c));
    }
    gmp_randclear(rs);
}

TEST_CASE("point codec") {
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, 31);

    SUBCASE("round trips, compressed and not") {
        for (const char* name : {"secp256k1", "P-521", "toy-1"}) {
            const CurveParams& c = registry_curve(name);
            for (int i = 0; i < 25; ++i) {
                GroupPoint p = random_point(c, rs);
                auto enc = encode_point(p, c, false);
                CHECK(enc.size() == 1 + 2 * c.field_bytes());
                CHECK(decode_point(enc, c) == p);
                CHECK(encode_point(decode_point(enc, c), c, false) == enc);
                auto cmp = encode_point(p, c, true);
                CHECK(cmp.size() == 1 + c.field_bytes());
                CHECK(decode_point(cmp, c) == p);
            }
        }
    }
    SUBCASE("identity round trip") {
        const CurveParams& c = registry_curve("secp256k1");
        CHECK(encode_point(GroupPoint::identity(), c, false) == std::vector<uint8_t>{0x00});
        CHECK(decode_point({0x00}, c).infinity);
    }
    SUBCASE("documented point decodes") {
        const CurveParams& c = registry_curve("secp256k1");
        std::vector<uint8_t> enc{0x04};
        auto append = [&](const Int& v) {
            std::vector<uint8_t> buf(32, 0);
            size_t count = 0;
            mpz_export(buf.data() + 32 - ((bit_length(v) + 7) / 8), &count, 1, 1, 1, 0,
                       v.get_mpz_t());
            enc.insert(enc.end(), buf.begin(), buf.end());
        };
        append(kQx);
        append(kQy);
        GroupPoint q = decode_point(enc, c);
        CHECK(q.x == kQx);
        CHECK(scalar_mul(kAlpha, c.generator(), c) == q);
    }
    SUBCASE("the two y roots of an x sum to the field prime") {
        const CurveParams& c = registry_curve("P-256");
        GroupPoint p = random_point(c, rs);
        auto even = encode_point(p, c, true);
        auto flip = even;
        flip[0] ^= 0x01;  // other parity
        GroupPoint p2 = decode_point(flip, c);
        CHECK(p2.x == p.x);
        CHECK((p.y + p2.y) % c.field() == 0);
    }
    SUBCASE("bad encodings raise typed errors") {
        const CurveParams& c = registry_curve("secp256k1");
        CHECK_THROWS_AS(decode_point({}, c), BadEncoding);
        CHECK_THROWS_AS(decode_point({0x05, 1, 2}, c), BadEncoding);
        CHECK_THROWS_AS(decode_point({0x00, 0x00}, c), BadEncoding);
        CHECK_THROWS_AS(decode_point(std::vector<uint8_t>(65, 0x04), c), PointNotOnCurve);
        auto enc = encode_point(c.generator(), c, false);
        enc[40] ^= 0xFF;
        CHECK_THROWS(decode_point(enc, c));
        CHECK_THROWS_AS(decode_point_hex("zz", c), BadEncoding);
    }
    gmp_randclear(rs);
}

TEST_CASE("curve files") {
    const char* path = "/tmp/weakdl_toy_curve.txt";
    {
        std::ofstream f(path);
        f << "# toy curve spec\n";
        f << "name = toy-file\n";
        f << "q = 67891\na = 1\nb = 78\ngx = 1\ngy = 7202\np = 68041\nh = 1\n";
    }
    auto entry = parse_curve_file(path);
    const auto* c = std::get_if<CurveParams>(&entry);
    REQUIRE(c != nullptr);
    CHECK(c->order() == 68041);
    CHECK(scalar_mul(c->order(), c->generator(), *c).infinity);

    {
        std::ofstream f(path);
        f << "name = order-only-example\np = 68041\n";
    }
    CHECK(std::holds_alternative<OrderOnlyEntry>(parse_curve_file(path)));

    {
        std::ofstream f(path);
        f << "name = broken\nq = 67891\na = 1\nb = 78\ngx = 1\ngy = 7203\np = 68041\n";
    }
    CHECK_THROWS_AS(parse_curve_file(path), PointNotOnCurve);
    std::remove(path);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(CurveParams::create("x", 16, 1, 1, 0, 1, 7, 1), NotPrime);
    CHECK_THROWS_AS(CurveParams::create("x", 67891, 0, 0, 1, 1, 68041, 1), InvalidParams);
    CHECK_THROWS_AS(CurveParams::create("x", 67891, 1, 78, 1, 7203, 68041, 1), PointNotOnCurve);
    CHECK_THROWS_AS(CurveParams::create("x", 67891, 1, 78, 1, 7202, 68040, 1), NotPrime);
    CHECK_THROWS_AS(CurveParams::create("x", 67891, 1, 78, 1, 7202, 68111, 1), InvalidParams);
}
