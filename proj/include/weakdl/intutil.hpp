#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "weakdl/errors.hpp"

namespace weakdl {

using Int = mpz_class;

inline unsigned bit_length(const Int& n) {
    if (n == 0) return 0;
    return static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2));
}

// ceil(sqrt(n)) for n >= 0
inline Int ceil_sqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r != n) r += 1;
    return r;
}

// exact log2 of an mpz as a double (enough precision for one-decimal output)
inline double log2_mpz(const Int& n) {
    if (n <= 0) throw OutOfRange("log2 of non-positive value");
    signed long exp;
    double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return static_cast<double>(exp) + std::log2(mant);
}

inline bool probably_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// Parses a decimal or 0x-prefixed hex integer string.
inline Int parse_int(const std::string& s) {
    std::string t = s;
    int base = 10;
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
        t = t.substr(2);
        base = 16;
    }
    Int v;
    if (t.empty() || mpz_set_str(v.get_mpz_t(), t.c_str(), base) != 0)
        throw ParseError("bad integer literal: " + s);
    return v;
}

// Accepts "123", "0x7b" or "2^20" style bounds.
inline Int parse_bound(const std::string& s) {
    auto caret = s.find('^');
    if (caret != std::string::npos) {
        Int base = parse_int(s.substr(0, caret));
        Int expo = parse_int(s.substr(caret + 1));
        if (base < 2 || expo < 0 || expo > 4096) throw ParseError("bad bound: " + s);
        Int r;
        mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), expo.get_ui());
        return r;
    }
    return parse_int(s);
}

}  // namespace weakdl
