#include "weakdl/factorization.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "weakdl/errors.hpp"

namespace weakdl {

namespace {

// odd primes up to bound, via a simple sieve (cached for the common bound)
std::vector<uint32_t> sieve_primes(uint32_t bound) {
    std::vector<bool> composite(bound + 1, false);
    std::vector<uint32_t> out;
    for (uint32_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (uint64_t j = uint64_t(i) * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

const std::vector<uint32_t>& default_primes() {
    static const std::vector<uint32_t> p = sieve_primes(1'000'000);
    return p;
}

void push_factor(std::map<Int, unsigned>& fac, const Int& p, unsigned e = 1) {
    fac[p] += e;
}

// Brent's variant of Pollard rho with batched gcds. Returns a nontrivial
// factor of n (possibly composite) or nullopt when the budget runs out.
// Deterministic for fixed (n, seed). `spent` accumulates used iterations.
std::optional<Int> rho_brent(const Int& n, uint64_t budget, uint64_t seed, uint64_t& spent) {
    if (mpz_even_p(n.get_mpz_t())) return Int(2);
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, seed);
    Int y, c, x, ys, q, g, diff;
    const unsigned batch = 128;
    while (spent < budget) {
        mpz_urandomm(y.get_mpz_t(), rs, n.get_mpz_t());
        mpz_urandomm(c.get_mpz_t(), rs, n.get_mpz_t());
        if (c == 0) c = 1;
        q = 1;
        g = 1;
        uint64_t r = 1;
        while (g == 1 && spent < budget) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) {
                y = (y * y + c) % n;
            }
            uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                uint64_t lim = std::min<uint64_t>(batch, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    diff = x - y;
                    q = (q * abs(diff)) % n;
                }
                spent += lim;
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
            }
            r <<= 1;
        }
        if (g == n) {
            // backtrack one step at a time
            do {
                ys = (ys * ys + c) % n;
                diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n && g != 1) {
            gmp_randclear(rs);
            return g;
        }
        // cycle degenerated; retry with fresh parameters
    }
    gmp_randclear(rs);
    return std::nullopt;
}

}  // namespace

Int PartialFactorization::reassemble() const {
    Int prod = cofactor;
    Int pk;
    for (const auto& [p, e] : known) {
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), e);
        prod *= pk;
    }
    return prod;
}

void PartialFactorization::validate() const {
    if (reassemble() != n) throw BadFactorization("factor product does not reassemble to n");
    for (const auto& [p, e] : known) {
        if (e == 0 || !probably_prime(p))
            throw BadFactorization("listed factor is not prime: " + p.get_str());
    }
    if (status == CofactorStatus::one && cofactor != 1)
        throw BadFactorization("cofactor status inconsistent");
    if (status == CofactorStatus::prime && !probably_prime(cofactor))
        throw BadFactorization("cofactor marked prime but is not");
}

PartialFactorization factor_bounded(const Int& n, const EffortBudget& effort) {
    if (n < 1) throw OutOfRange("factor_bounded needs n >= 1");
    PartialFactorization f;
    f.n = n;
    f.trial_bound = effort.trial_bound;
    std::map<Int, unsigned> fac;
    Int cof = n;

    const auto& primes =
        effort.trial_bound == 1'000'000 ? default_primes()
                                        : sieve_primes(static_cast<uint32_t>(std::min<uint64_t>(
                                              effort.trial_bound, 100'000'000)));
    for (uint32_t p : primes) {
        if (p > effort.trial_bound) break;
        if (cof == 1) break;
        while (mpz_divisible_ui_p(cof.get_mpz_t(), p)) {
            push_factor(fac, p);
            mpz_divexact_ui(cof.get_mpz_t(), cof.get_mpz_t(), p);
        }
        if (Int(p) * p > cof) break;  // remaining cofactor is prime or 1
    }

    // split the remainder with rho until the budget runs out
    uint64_t spent = 0;
    std::vector<Int> stack;
    if (cof > 1) stack.push_back(cof);
    Int leftover = 1;
    while (!stack.empty()) {
        Int c = stack.back();
        stack.pop_back();
        if (c == 1) continue;
        if (probably_prime(c)) {
            push_factor(fac, c);
            continue;
        }
        auto g = rho_brent(c, effort.rho_iterations, effort.seed, spent);
        if (!g) {
            leftover *= c;
            continue;
        }
        stack.push_back(*g);
        stack.push_back(c / *g);
    }

    f.known.assign(fac.begin(), fac.end());
    f.cofactor = leftover;
    f.status = leftover == 1 ? CofactorStatus::one : CofactorStatus::composite;
    f.validate();
    return f;
}

PartialFactorization apply_hints(PartialFactorization f,
                                 const std::vector<std::pair<Int, unsigned>>& hints) {
    std::map<Int, unsigned> fac(f.known.begin(), f.known.end());
    for (const auto& [p, e] : hints) {
        if (p < 2 || e == 0) throw BadFactorization("bad hint factor " + p.get_str());
        if (!probably_prime(p)) throw BadFactorization("hint factor not prime: " + p.get_str());
        if (!mpz_divisible_p(f.n.get_mpz_t(), p.get_mpz_t()))
            throw BadFactorization("hint factor does not divide n: " + p.get_str());
        for (unsigned i = 0; i < e && mpz_divisible_p(f.cofactor.get_mpz_t(), p.get_mpz_t());
             ++i) {
            fac[p] += 1;
            f.cofactor /= p;
        }
    }
    if (f.cofactor > 1 && probably_prime(f.cofactor)) {
        fac[f.cofactor] += 1;
        f.cofactor = 1;
    }
    f.known.assign(fac.begin(), fac.end());
    f.status = f.cofactor == 1 ? CofactorStatus::one : CofactorStatus::composite;
    f.validate();
    return f;
}

std::vector<std::pair<Int, unsigned>> parse_hint_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open hint file: " + path);
    std::vector<std::pair<Int, unsigned>> hints;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string tok;
        std::istringstream ls(line);
        while (ls >> tok) {
            auto caret = tok.find('^');
            try {
                if (caret == std::string::npos) {
                    hints.emplace_back(parse_int(tok), 1);
                } else {
                    hints.emplace_back(parse_int(tok.substr(0, caret)),
                                       static_cast<unsigned>(
                                           parse_int(tok.substr(caret + 1)).get_ui()));
                }
            } catch (const ParseError&) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad factor token '" +
                                 tok + "'");
            }
        }
    }
    return hints;
}

DivisorSet divisors_up_to(const PartialFactorization& f, const Int& bound) {
    if (bound < 1) throw OutOfRange("divisor bound must be >= 1");
    DivisorSet ds;
    ds.bound = bound;
    ds.divisors = {1};
    for (const auto& [p, e] : f.known) {
        size_t base_count = ds.divisors.size();
        for (size_t i = 0; i < base_count; ++i) {
            Int v = ds.divisors[i];
            for (unsigned k = 0; k < e; ++k) {
                v *= p;
                if (v > bound) break;
                ds.divisors.push_back(v);
            }
        }
        if (ds.divisors.size() > 4'000'000)
            throw OutOfRange("divisor enumeration exceeds safety cap");
    }
    std::sort(ds.divisors.begin(), ds.divisors.end());
    ds.complete = f.cofactor == 1 || Int(f.trial_bound) >= bound;
    for (const auto& [p, e] : f.known) {
        (void)e;
        if (p <= bound) ds.primes.push_back(p);
    }
    return ds;
}

DivisorSet reduce_divisor_set(const DivisorSet& ds) {
    DivisorSet out;
    out.bound = ds.bound;
    out.complete = ds.complete;
    out.primes = ds.primes;
    // d is maximal iff d*p is not in the set for any known prime p; when the
    // prime list is absent fall back to pairwise divisibility.
    if (!ds.primes.empty() || ds.divisors.size() <= 1) {
        std::set<Int> members(ds.divisors.begin(), ds.divisors.end());
        for (const Int& d : ds.divisors) {
            bool maximal = true;
            for (const Int& p : ds.primes) {
                Int m = d * p;
                if (m > ds.bound) continue;
                if (members.count(m)) {
                    maximal = false;
                    break;
                }
            }
            if (maximal) out.divisors.push_back(d);
        }
        return out;
    }
    const auto& d = ds.divisors;
    for (size_t i = 0; i < d.size(); ++i) {
        bool maximal = true;
        for (size_t j = i + 1; j < d.size(); ++j) {
            if (mpz_divisible_p(d[j].get_mpz_t(), d[i].get_mpz_t())) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.divisors.push_back(d[i]);
    }
    return out;
}

Int euler_phi(const Int& d, const PartialFactorization& f) {
    Int phi = 1, rem = d, pk;
    for (const auto& [p, e] : f.known) {
        (void)e;
        if (!mpz_divisible_p(rem.get_mpz_t(), p.get_mpz_t())) continue;
        unsigned k = 0;
        while (mpz_divisible_p(rem.get_mpz_t(), p.get_mpz_t())) {
            rem /= p;
            ++k;
        }
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k - 1);
        phi *= (p - 1) * pk;
    }
    if (rem != 1) throw BadFactorization("divisor has a factor outside the known set");
    return phi;
}

Int weak_key_count(const PartialFactorization& f, const Int& bound) {
    Int sum = 0;
    for (const Int& d : divisors_up_to(f, bound).divisors) sum += euler_phi(d, f);
    return sum;
}

double weak_key_count_log2(const PartialFactorization& f, const Int& bound) {
    return log2_mpz(weak_key_count(f, bound));
}

double test_cost_log2(const PartialFactorization& f, const Int& bound) {
    DivisorSet reduced = reduce_divisor_set(divisors_up_to(f, bound));
    Int sum = 0;
    for (const Int& d : reduced.divisors) sum += 2 * ceil_sqrt(d);
    return log2_mpz(sum);
}

std::vector<std::pair<Int, unsigned>> factor_over_known(const Int& d,
                                                        const PartialFactorization& f) {
    std::vector<std::pair<Int, unsigned>> out;
    Int rem = d;
    for (const auto& [p, e] : f.known) {
        (void)e;
        unsigned k = 0;
        while (mpz_divisible_p(rem.get_mpz_t(), p.get_mpz_t())) {
            rem /= p;
            ++k;
        }
        if (k) out.emplace_back(p, k);
    }
    if (rem != 1) throw BadFactorization("value does not factor over the known primes");
    return out;
}

std::string format_factorization(const PartialFactorization& f) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, e] : f.known) {
        if (!first) os << " * ";
        first = false;
        os << p.get_str();
        if (e > 1) os << "^" << e;
    }
    if (f.cofactor != 1) {
        if (!first) os << " * ";
        os << f.cofactor.get_str() << " (composite)";
    }
    if (first && f.cofactor == 1) os << "1";
    return os.str();
}

}  // namespace weakdl
