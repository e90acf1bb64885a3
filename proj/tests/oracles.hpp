// Independent brute-force oracles used to freeze expected values. These stay
// deliberately naive and must not share code paths with the library.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "weakdl/ecgroup.hpp"
#include "weakdl/intutil.hpp"

namespace oracles {

using weakdl::Int;

// multiplicative order of a mod p by repeated multiplication
inline uint64_t order_brute(uint64_t a, uint64_t p) {
    uint64_t v = a % p, o = 1;
    while (v != 1) {
        v = (unsigned __int128)(v)*a % p;
        ++o;
    }
    return o;
}

// count of alpha in [1, p-1] with multiplicative order <= bound
inline uint64_t weak_count_brute(uint64_t p, uint64_t bound) {
    uint64_t count = 0;
    for (uint64_t a = 1; a < p; ++a)
        if (order_brute(a, p) <= bound) ++count;
    return count;
}

// trial-division factorization for small n
inline std::map<uint64_t, unsigned> factor_brute(uint64_t n) {
    std::map<uint64_t, unsigned> f;
    for (uint64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            f[p] += 1;
            n /= p;
        }
    if (n > 1) f[n] += 1;
    return f;
}

// all divisors of n that are <= bound, by scanning
inline std::vector<uint64_t> divisors_brute(uint64_t n, uint64_t bound) {
    std::vector<uint64_t> out;
    for (uint64_t d = 1; d <= bound && d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

// pairwise divisibility filter
inline std::vector<uint64_t> maximal_brute(const std::vector<uint64_t>& divs) {
    std::vector<uint64_t> out;
    for (size_t i = 0; i < divs.size(); ++i) {
        bool maximal = true;
        for (size_t j = 0; j < divs.size(); ++j)
            if (i != j && divs[j] % divs[i] == 0) maximal = false;
        if (maximal) out.push_back(divs[i]);
    }
    return out;
}

// discrete log of g1 to base g restricted to the order-d subgroup of F_p*:
// returns i with g1 = (zeta^i)*g, by trying every i in [0, d)
inline std::optional<uint64_t> subgroup_dlog_brute(const weakdl::GroupPoint& g1,
                                                   const weakdl::CurveParams& curve,
                                                   const Int& zeta, uint64_t d) {
    const Int& p = curve.order();
    Int e = 1;
    for (uint64_t i = 0; i < d; ++i) {
        if (weakdl::scalar_mul(e, curve.generator(), curve) == g1) return i;
        e = e * zeta % p;
    }
    return std::nullopt;
}

// scalar multiplication by repeated addition
inline weakdl::GroupPoint repeated_add(uint64_t k, const weakdl::GroupPoint& pt,
                                       const weakdl::CurveParams& curve) {
    weakdl::GroupPoint acc = weakdl::GroupPoint::identity();
    for (uint64_t i = 0; i < k; ++i) acc = weakdl::add(acc, pt, curve);
    return acc;
}

}  // namespace oracles
