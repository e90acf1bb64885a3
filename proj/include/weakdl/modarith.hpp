#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "weakdl/factorization.hpp"
#include "weakdl/intutil.hpp"

namespace weakdl {

// Prime order of the cryptographic group; the exponent field is F_p*.
class PrimeModulus {
  public:
    explicit PrimeModulus(Int p);
    const Int& value() const { return p_; }

  private:
    Int p_;
};

Int pow_mod(const Int& base, const Int& exponent, const PrimeModulus& m);

// Generator of the order-d subgroup of F_p*, zeta = 1 when d = 1.
struct SubgroupContext {
    PrimeModulus modulus;
    Int d;
    Int zeta;
};

// Deterministic: tries base candidates 2, 3, 5, 7, ... and accepts the first
// whose (p-1)/d power has exact order d.
SubgroupContext subgroup_generator(const PrimeModulus& m, const Int& d,
                                   const std::vector<std::pair<Int, unsigned>>& d_factors);

struct OrderResult {
    std::optional<Int> order;  // nullopt: not determined by the known factors
    Int order_divides = 1;     // alpha^order_divides == 1 is verified
};

OrderResult multiplicative_order(const Int& alpha, const PrimeModulus& m,
                                 const PartialFactorization& pm1);

}  // namespace weakdl
