#include <cmath>
#include <limits>

#include <omp.h>

#include "weakdl/errors.hpp"
#include "weakdl/weaksolve.hpp"

namespace weakdl {

namespace {

Int ceil_nth_root(const Int& p, unsigned c) {
    Int r;
    mpz_root(r.get_mpz_t(), p.get_mpz_t(), c);
    Int rc;
    mpz_pow_ui(rc.get_mpz_t(), r.get_mpz_t(), c);
    if (rc != p) r += 1;
    return r;
}

}  // namespace

double kkm_cost_estimate(const Int& p, const Int& d, unsigned c) {
    double log2p = log2_mpz(p);
    double broot = log2p / c;
    if (broot > 300) return std::numeric_limits<double>::infinity();
    double b = std::exp2(broot);
    double sqd = std::exp2(log2_mpz(d) / 2);
    return c * (log2p + b) + 2.0 * (c - 1) * sqd;
}

unsigned choose_c(const Int& p, const Int& d, uint64_t table_cap) {
    if (d < 2) throw OutOfRange("choose_c requires d >= 2");
    if (table_cap < 2) throw OutOfRange("choose_c requires table_cap >= 2");
    unsigned scan_max = std::max<unsigned>(96, 3 * bit_length(p));
    unsigned best = 2;
    double best_cost = std::numeric_limits<double>::infinity();
    for (unsigned c = 2; c <= scan_max; ++c) {
        double cost = kkm_cost_estimate(p, d, c);
        if (cost < best_cost) {
            best_cost = cost;
            best = c;
        }
    }
    unsigned c = best;
    while (c < scan_max + 64) {
        Int entries = Int(c) * ceil_nth_root(p, c);
        if (entries <= Int(static_cast<unsigned long>(table_cap))) break;
        ++c;
    }
    return c;
}

KkmTable KkmTable::build(const GroupPoint& base, unsigned c, const CurveParams& curve,
                         OpCounters* ops, int threads) {
    if (c < 2) throw InvalidParams("kkm table needs c >= 2");
    if (base.infinity) throw IdentityInput("kkm base must not be the identity");
    KkmTable t;
    t.base_ = base;
    t.c_ = c;
    t.b_ = ceil_nth_root(curve.order(), c);
    if (t.b_ > Int(uint64_t(1) << 32)) throw InvalidParams("kkm table width exceeds 2^32");
    uint64_t b = t.b_.get_ui();

    // row bases: base, b*base, b^2*base, ...
    std::vector<GroupPoint> row_base(c);
    row_base[0] = base;
    for (unsigned i = 1; i < c; ++i) row_base[i] = scalar_mul(t.b_, row_base[i - 1], curve, ops);

    t.table_.assign(c, {});
    for (unsigned i = 0; i < c; ++i) {
        t.table_[i].resize(b);
        t.table_[i][0] = GroupPoint::identity();
        if (b > 1) t.table_[i][1] = row_base[i];
    }

    if (threads <= 1 || b < 1024) {
        for (unsigned i = 0; i < c; ++i) {
            for (uint64_t j = 2; j < b; ++j)
                t.table_[i][j] = add(t.table_[i][j - 1], row_base[i], curve, ops);
        }
        return t;
    }

    // parallel fill: independent chunks, each seeded by one scalar_mul
    const uint64_t chunk = 4096;
    struct Task {
        unsigned row;
        uint64_t lo, hi;
    };
    std::vector<Task> tasks;
    for (unsigned i = 0; i < c; ++i)
        for (uint64_t lo = 2; lo < b; lo += chunk) tasks.push_back({i, lo, std::min(b, lo + chunk)});

    OpCounters total;
#pragma omp parallel num_threads(threads)
    {
        OpCounters local;
#pragma omp for schedule(dynamic)
        for (size_t ti = 0; ti < tasks.size(); ++ti) {
            const Task& task = tasks[ti];
            GroupPoint prev;
            if (task.lo == 2)
                prev = t.table_[task.row][1];
            else
                prev = scalar_mul(Int(static_cast<unsigned long>(task.lo - 1)),
                                  row_base[task.row], curve, &local);
            for (uint64_t j = task.lo; j < task.hi; ++j) {
                prev = add(prev, row_base[task.row], curve, &local);
                t.table_[task.row][j] = prev;
            }
        }
#pragma omp critical
        {
            total.scalar_mults += local.scalar_mults;
            total.point_adds += local.point_adds;
        }
    }
    if (ops) {
        ops->scalar_mults += total.scalar_mults;
        ops->point_adds += total.point_adds;
    }
    return t;
}

GroupPoint KkmTable::pow(const Int& delta, const CurveParams& curve, OpCounters* ops) const {
    Int e;
    mpz_mod(e.get_mpz_t(), delta.get_mpz_t(), curve.order().get_mpz_t());
    GroupPoint acc = GroupPoint::identity();
    bool have = false;
    uint64_t b = b_.get_ui();
    Int q;
    unsigned long digit;
    for (unsigned i = 0; i < c_ && e != 0; ++i) {
        digit = mpz_fdiv_qr_ui(e.get_mpz_t(), q.get_mpz_t(), e.get_mpz_t(), b);
        (void)q;
        if (digit == 0) continue;
        const GroupPoint& entry = table_[i][digit];
        if (!have) {
            acc = entry;
            have = true;
        } else {
            acc = add(acc, entry, curve, ops);
        }
    }
    return acc;
}

}  // namespace weakdl
