#include "weakdl/modarith.hpp"

#include "weakdl/errors.hpp"

namespace weakdl {

PrimeModulus::PrimeModulus(Int p) : p_(std::move(p)) {
    if (p_ < 3 || !probably_prime(p_)) throw NotPrime("modulus is not an odd prime");
}

Int pow_mod(const Int& base, const Int& exponent, const PrimeModulus& m) {
    if (base < 0) throw OutOfRange("pow_mod base must be nonnegative");
    if (exponent < 0) throw OutOfRange("pow_mod exponent must be nonnegative");
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), m.value().get_mpz_t());
    return r;
}

namespace {

bool has_exact_order(const Int& z, const Int& d,
                     const std::vector<std::pair<Int, unsigned>>& d_factors,
                     const PrimeModulus& m) {
    if (pow_mod(z, d, m) != 1) return false;
    for (const auto& [q, e] : d_factors) {
        (void)e;
        if (pow_mod(z, d / q, m) == 1) return false;
    }
    return true;
}

}  // namespace

SubgroupContext subgroup_generator(const PrimeModulus& m, const Int& d,
                                   const std::vector<std::pair<Int, unsigned>>& d_factors) {
    const Int& p = m.value();
    if (d < 1 || !mpz_divisible_p(Int(p - 1).get_mpz_t(), d.get_mpz_t()))
        throw NotADivisor("d does not divide p-1");
    if (d == 1) return {m, d, 1};

    Int prod = 1, pk;
    for (const auto& [q, e] : d_factors) {
        if (!probably_prime(q)) throw BadFactorization("d factor is not prime: " + q.get_str());
        mpz_pow_ui(pk.get_mpz_t(), q.get_mpz_t(), e);
        prod *= pk;
    }
    if (prod != d) throw BadFactorization("d factorization does not multiply back to d");

    Int cofactor = (p - 1) / d;
    Int x = 2;
    while (true) {
        Int z = pow_mod(x, cofactor, m);
        if (has_exact_order(z, d, d_factors, m)) return {m, d, z};
        mpz_nextprime(x.get_mpz_t(), x.get_mpz_t());
        if (x >= p) throw Error("no subgroup generator found");  // unreachable for prime p
    }
}

OrderResult multiplicative_order(const Int& alpha, const PrimeModulus& m,
                                 const PartialFactorization& pm1) {
    const Int& p = m.value();
    if (alpha <= 0 || alpha >= p) throw OutOfRange("alpha must lie in (0, p)");
    if (pm1.n != p - 1) throw BadFactorization("pm1 is not a factorization of p-1");

    // Start from order | p-1 and peel known prime powers; the unfactored
    // cofactor can only be discharged as a whole block.
    Int o = p - 1;
    bool cof_present = pm1.cofactor > 1;
    auto peel_known = [&] {
        for (const auto& [q, e] : pm1.known) {
            (void)e;
            while (mpz_divisible_p(o.get_mpz_t(), q.get_mpz_t()) && pow_mod(alpha, o / q, m) == 1)
                o /= q;
        }
    };
    peel_known();
    if (cof_present) {
        if (pow_mod(alpha, o / pm1.cofactor, m) == 1) {
            o /= pm1.cofactor;
            cof_present = false;
            peel_known();
        }
    }
    if (!cof_present) return {o, o};
    // order divides o but the cofactor's primes cannot be separated
    return {std::nullopt, o};
}

}  // namespace weakdl
