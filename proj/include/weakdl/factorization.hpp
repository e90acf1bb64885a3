#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "weakdl/intutil.hpp"

namespace weakdl {

struct EffortBudget {
    uint64_t trial_bound = 1'000'000;  // trial division covers all primes <= this
    uint64_t rho_iterations = 4'000'000;
    uint64_t seed = 1;
};

enum class CofactorStatus { one, prime, composite, unknown };

struct PartialFactorization {
    Int n = 1;
    std::vector<std::pair<Int, unsigned>> known;  // (prime, exponent), ascending
    Int cofactor = 1;
    CofactorStatus status = CofactorStatus::one;
    uint64_t trial_bound = 0;  // no prime <= trial_bound divides the cofactor

    bool complete() const { return cofactor == 1; }
    Int reassemble() const;
    void validate() const;  // throws BadFactorization on inconsistency
};

PartialFactorization factor_bounded(const Int& n, const EffortBudget& effort = {});

// Fold externally supplied prime factors into f. Each hint prime is
// primality-checked and must divide the remaining cofactor.
PartialFactorization apply_hints(PartialFactorization f,
                                 const std::vector<std::pair<Int, unsigned>>& hints);

// Hint file: one `prime` or `prime^exponent` per line, '#' comments.
std::vector<std::pair<Int, unsigned>> parse_hint_file(const std::string& path);

struct DivisorSet {
    Int bound = 1;
    std::vector<Int> divisors;  // ascending, includes 1
    bool complete = false;      // true iff no unknown prime <= bound can divide n
    std::vector<Int> primes;    // known primes of n that are <= bound
};

DivisorSet divisors_up_to(const PartialFactorization& f, const Int& bound);

// Divisibility-maximal subset: every input divisor divides some output element,
// no output element divides another.
DivisorSet reduce_divisor_set(const DivisorSet& ds);

// Euler phi of a divisor composed of f's known primes.
Int euler_phi(const Int& d, const PartialFactorization& f);

// Exact count of elements of F_p* with order <= bound, p-1 = f.n: sum of phi(d).
Int weak_key_count(const PartialFactorization& f, const Int& bound);
double weak_key_count_log2(const PartialFactorization& f, const Int& bound);

// log2 of sum over the reduced divisor set of 2*ceil(sqrt(d)).
double test_cost_log2(const PartialFactorization& f, const Int& bound);

// Factorization of d by trial division over f's known primes; throws
// BadFactorization if d does not split completely over them.
std::vector<std::pair<Int, unsigned>> factor_over_known(const Int& d,
                                                        const PartialFactorization& f);

std::string format_factorization(const PartialFactorization& f);

}  // namespace weakdl
