#include <chrono>

#include "weakdl/errors.hpp"
#include "weakdl/weaksolve.hpp"

namespace weakdl {

AuditReport audit_key(const GroupPoint& g1, const CurveParams& curve, const Int& bound,
                      const AuditOptions& opt) {
    if (g1.infinity) throw IdentityInput("cannot audit the identity point");
    if (bound < 1) throw OutOfRange("bound must be >= 1");
    auto t0 = std::chrono::steady_clock::now();

    AuditReport rep;
    rep.curve = curve.name();
    rep.bound = bound;

    PrimeModulus pm(curve.order());
    PartialFactorization f = factor_bounded(curve.order() - 1, opt.effort);
    if (!opt.pm1_hints.empty()) f = apply_hints(f, opt.pm1_hints);

    DivisorSet all = divisors_up_to(f, bound);
    DivisorSet reduced = reduce_divisor_set(all);

    OpCounters total;
    SolverOptions sopt;
    sopt.threads = opt.threads;
    sopt.table_cap = opt.table_cap;
    sopt.progress = opt.progress;

    const GroupPoint& g = curve.generator();
    rep.outcome = AuditOutcome::not_weak;
    for (const Int& d : reduced.divisors) {
        rep.subgroups_tested.push_back(d);
        SubgroupContext ctx = subgroup_generator(pm, d, factor_over_known(d, f));
        std::optional<Int> alpha;
        if (opt.strategy == Strategy::bsgs || d == 1) {
            alpha = bsgs_weak(g, g1, ctx, curve, &total, sopt).alpha;
        } else {
            KangarooParams kp = make_kangaroo_params(d, opt.seed);
            kp.walkers = std::max(1, opt.threads);
            alpha = kangaroo_weak(g, g1, ctx, kp, curve, &total, sopt).alpha;
        }
        if (alpha) {
            rep.outcome = AuditOutcome::weak;
            rep.alpha = alpha;
            rep.weak_d = d;
            break;
        }
    }
    if (rep.outcome == AuditOutcome::not_weak)
        rep.complete = opt.strategy == Strategy::bsgs && all.complete;

    rep.scalar_mults = total.scalar_mults;
    rep.point_adds = total.point_adds;
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

std::pair<Int, GroupPoint> gen_weak_key(const CurveParams& curve, const Int& d,
                                        std::optional<Int> index, uint64_t seed) {
    PrimeModulus pm(curve.order());
    Int pm1 = curve.order() - 1;
    if (d < 1 || !mpz_divisible_p(pm1.get_mpz_t(), d.get_mpz_t()))
        throw NotADivisor("d does not divide p-1");

    PartialFactorization fd = factor_bounded(d);
    if (!fd.complete()) throw BadFactorization("cannot factor d with default effort");
    SubgroupContext ctx = subgroup_generator(pm, d, fd.known);

    Int i;
    if (index) {
        if (*index < 1 || *index > d) throw OutOfRange("index must lie in [1, d]");
        i = *index;
    } else {
        gmp_randstate_t rs;
        gmp_randinit_mt(rs);
        gmp_randseed_ui(rs, seed);
        mpz_urandomm(i.get_mpz_t(), rs, d.get_mpz_t());
        gmp_randclear(rs);
        i += 1;
    }
    Int alpha = pow_mod(ctx.zeta, i, pm);
    return {alpha, scalar_mul(alpha, curve.generator(), curve)};
}

}  // namespace weakdl
