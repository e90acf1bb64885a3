#include <unordered_map>

#include <omp.h>

#include "weakdl/errors.hpp"
#include "weakdl/weaksolve.hpp"

namespace weakdl {

namespace {

std::string map_key(const GroupPoint& p, const CurveParams& curve) {
    auto bytes = encode_point(p, curve, /*compressed=*/true);
    return std::string(bytes.begin(), bytes.end());
}

double plain_cost_estimate(const Int& p, const Int& d) {
    // two chains of m+1 full-width exponentiations, ~1.5 log2 p adds each
    double m = std::exp2(log2_mpz(d) / 2);
    return 2.0 * (m + 1) * 1.5 * log2_mpz(p);
}

}  // namespace

BsgsResult bsgs_weak(const GroupPoint& g, const GroupPoint& g1, const SubgroupContext& ctx,
                     const CurveParams& curve, OpCounters* ops, const SolverOptions& opt) {
    if (g1.infinity) throw IdentityInput("public key is the identity");
    const Int& p = ctx.modulus.value();
    const Int& d = ctx.d;
    BsgsResult res;

    if (d == 1) {
        if (g1 == g) res.alpha = 1;
        return res;
    }

    Int m = ceil_sqrt(d);
    if (m > Int(uint64_t(1) << 40)) throw InvalidParams("subgroup too large for baby-step table");
    uint64_t mu = m.get_ui();

    bool use_kkm = false;
    unsigned c = 0;
    if (opt.allow_kkm) {
        c = choose_c(p, d, opt.table_cap);
        use_kkm = 2.0 * kkm_cost_estimate(p, d, c) < plain_cost_estimate(p, d);
    }
    res.used_kkm = use_kkm;

    OpCounters local;
    uint64_t next_progress = 1 << 16;
    auto tick = [&] {
        if (opt.progress && local.point_adds + local.scalar_mults * 8 >= next_progress) {
            opt.progress(local.point_adds + local.scalar_mults * 8);
            next_progress += 1 << 16;
        }
    };

    // zeta^m mod p drives the giant steps
    Int zm = pow_mod(ctx.zeta, m, ctx.modulus);

    std::unordered_map<std::string, uint64_t> baby;
    baby.reserve(mu + 2);
    auto record = [&](const GroupPoint& pt, uint64_t u) {
        baby.emplace(map_key(pt, curve), u);  // keeps the smallest u on collision
    };

    std::optional<KkmTable> baby_table, giant_table;
    if (use_kkm) {
        baby_table = KkmTable::build(g1, c, curve, &local, opt.threads);
        giant_table = KkmTable::build(g, c, curve, &local, opt.threads);
    }

    // baby steps: g1^(zeta^u) for u in [0, m]
    if (opt.threads > 1 && mu >= 512) {
        const uint64_t chunk = (mu + 1 + opt.threads * 4 - 1) / (opt.threads * 4);
        std::vector<std::pair<std::string, uint64_t>> flat(mu + 1);
#pragma omp parallel num_threads(opt.threads)
        {
            OpCounters tl;
            uint64_t texp = 0;
#pragma omp for schedule(dynamic)
            for (uint64_t lo = 0; lo <= mu; lo += chunk) {
                uint64_t hi = std::min(mu, lo + chunk - 1);
                Int e = pow_mod(ctx.zeta, Int(static_cast<unsigned long>(lo)), ctx.modulus);
                for (uint64_t u = lo; u <= hi; ++u) {
                    GroupPoint pt = use_kkm ? baby_table->pow(e, curve, &tl)
                                            : scalar_mul(e, g1, curve, &tl);
                    ++texp;
                    flat[u] = {map_key(pt, curve), u};
                    if (u < hi) e = e * ctx.zeta % p;
                }
            }
#pragma omp critical
            {
                local.point_adds += tl.point_adds;
                local.scalar_mults += tl.scalar_mults;
                res.exponentiations += texp;
            }
        }
        for (auto& kv : flat) baby.emplace(std::move(kv.first), kv.second);
    } else {
        if (use_kkm) {
            Int e = 1;
            record(g1, 0);
            for (uint64_t u = 1; u <= mu; ++u) {
                e = e * ctx.zeta % p;
                record(baby_table->pow(e, curve, &local), u);
                ++res.exponentiations;
                tick();
            }
        } else {
            GroupPoint cur = g1;
            record(cur, 0);
            for (uint64_t u = 1; u <= mu; ++u) {
                cur = scalar_mul(ctx.zeta, cur, curve, &local);
                record(cur, u);
                ++res.exponentiations;
                tick();
            }
        }
    }

    // giant steps: g^(zeta^(v m)) for v in [0, m]; first match yields alpha
    std::optional<std::pair<uint64_t, uint64_t>> hit;  // (v, u)
    auto probe = [&](const GroupPoint& pt, uint64_t v) -> bool {
        auto it = baby.find(map_key(pt, curve));
        if (it == baby.end()) return false;
        hit = {v, it->second};
        return true;
    };

    if (opt.threads > 1 && mu >= 512) {
        const uint64_t chunk = 2048;
        bool found = false;
#pragma omp parallel num_threads(opt.threads)
        {
            OpCounters tl;
            uint64_t texp = 0;
            std::optional<std::pair<uint64_t, uint64_t>> thit;
#pragma omp for schedule(dynamic)
            for (uint64_t lo = 0; lo <= mu; lo += chunk) {
                bool skip;
#pragma omp atomic read
                skip = found;
                if (skip) continue;
                uint64_t hi = std::min(mu, lo + chunk - 1);
                Int e = pow_mod(zm, Int(static_cast<unsigned long>(lo)), ctx.modulus);
                for (uint64_t v = lo; v <= hi; ++v) {
                    GroupPoint pt = use_kkm ? giant_table->pow(e, curve, &tl)
                                            : scalar_mul(e, g, curve, &tl);
                    ++texp;
                    auto it = baby.find(map_key(pt, curve));
                    if (it != baby.end()) {
                        thit = {v, it->second};
#pragma omp atomic write
                        found = true;
                        break;
                    }
                    if (v < hi) e = e * zm % p;
                }
            }
#pragma omp critical
            {
                local.point_adds += tl.point_adds;
                local.scalar_mults += tl.scalar_mults;
                res.exponentiations += texp;
                if (thit && (!hit || thit->first < hit->first)) hit = thit;
            }
        }
    } else {
        if (use_kkm) {
            Int e = 1;
            if (!probe(g, 0)) {
                for (uint64_t v = 1; v <= mu; ++v) {
                    e = e * zm % p;
                    ++res.exponentiations;
                    tick();
                    if (probe(giant_table->pow(e, curve, &local), v)) break;
                }
            }
        } else {
            GroupPoint cur = g;
            if (!probe(cur, 0)) {
                for (uint64_t v = 1; v <= mu; ++v) {
                    cur = scalar_mul(zm, cur, curve, &local);
                    ++res.exponentiations;
                    tick();
                    if (probe(cur, v)) break;
                }
            }
        }
    }

    if (hit) {
        Int i = (Int(static_cast<unsigned long>(hit->first)) * m -
                 Int(static_cast<unsigned long>(hit->second))) % d;
        if (i < 0) i += d;
        Int alpha = pow_mod(ctx.zeta, i, ctx.modulus);
        if (scalar_mul(alpha, g, curve, &local) != g1)
            throw Error("bsgs match failed verification");
        res.alpha = alpha;
    }
    if (ops) {
        ops->point_adds += local.point_adds;
        ops->scalar_mults += local.scalar_mults;
    }
    return res;
}

}  // namespace weakdl
