#include <random>
#include <unordered_map>

#include <omp.h>

#include "weakdl/errors.hpp"
#include "weakdl/weaksolve.hpp"

namespace weakdl {

namespace {

Int jump_cap(const Int& d, bool wide) {
    Int cs = ceil_sqrt(d);
    if (wide) return cs < 1 ? Int(1) : cs;      // jumps up to sqrt(d)
    Int cap = (cs + 1) / 2;                     // ceil(sqrt(d)/2)
    return cap < 1 ? Int(1) : cap;
}

std::string dp_key(const GroupPoint& p, const CurveParams& curve) {
    auto bytes = encode_point(p, curve, /*compressed=*/true);
    return std::string(bytes.begin(), bytes.end());
}

}  // namespace

unsigned partition_index(const GroupPoint& p, unsigned L) {
    if (p.infinity) throw IdentityPoint("partition function is undefined at the identity");
    if (L == 0 || (L & (L - 1)) != 0) throw InvalidParams("L must be a power of two");
    return static_cast<unsigned>(mpz_fdiv_ui(p.x.get_mpz_t(), L)) + 1;
}

void KangarooParams::validate(const Int& d) const {
    if (d < 2) throw InvalidParams("kangaroo requires d >= 2");
    if (L == 0 || (L & (L - 1)) != 0) throw InvalidParams("L must be a power of two");
    if (jump_set.size() != L) throw InvalidParams("jump set must have exactly L entries");
    Int cap = jump_cap(d, wide_jumps);
    for (const Int& s : jump_set)
        if (s < 1 || s > cap) throw InvalidParams("jump outside [1, ceil(sqrt(d)/2)]");
    if (walkers < 1) throw InvalidParams("need at least one walker pair");
    if (max_jumps == 0) throw InvalidParams("max_jumps must be positive");
}

KangarooParams make_kangaroo_params(const Int& d, uint64_t seed, unsigned L, unsigned t_bits,
                                    bool wide_jumps) {
    if (d < 2) throw InvalidParams("kangaroo requires d >= 2");
    KangarooParams kp;
    kp.L = L;
    kp.seed = seed;
    kp.wide_jumps = wide_jumps;
    double log2d = log2_mpz(d);
    kp.t_bits = t_bits ? t_bits : std::max(1, static_cast<int>(log2d / 4));

    Int cap = jump_cap(d, wide_jumps);
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 1);
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, rng());
    kp.jump_set.resize(L);
    Int sum = 0;
    for (unsigned k = 0; k + 1 < L; ++k) {
        Int s;
        mpz_urandomm(s.get_mpz_t(), rs, cap.get_mpz_t());
        s += 1;
        kp.jump_set[k] = s;
        sum += s;
    }
    gmp_randclear(rs);
    // last jump pulls the mean toward sqrt(d)/2, clamped to the cap
    Int target_sum = (ceil_sqrt(d) * L + 1) / 2;
    Int last = target_sum - sum;
    if (last < 1) last = 1;
    if (last > cap) last = cap;
    kp.jump_set[L - 1] = last;

    kp.max_jumps = 20 * ceil_sqrt(d).get_ui() + 4 * (uint64_t(1) << kp.t_bits);
    return kp;
}

namespace {

struct Walk {
    bool tame;
    int id;
    GroupPoint point;
    Int total;  // known zeta-exponent: point = g^(zeta^total) resp. g1^(zeta^total)
    uint64_t steps = 0;
    uint64_t since_progress = 0;
};

}  // namespace

KangarooResult kangaroo_weak(const GroupPoint& g, const GroupPoint& g1,
                             const SubgroupContext& ctx, const KangarooParams& params,
                             const CurveParams& curve, OpCounters* ops, const SolverOptions& opt,
                             const WalkObserver& observe) {
    if (g1.infinity) throw IdentityInput("public key is the identity");
    const Int& d = ctx.d;
    params.validate(d);

    KangarooResult res;
    OpCounters local;

    // precomputed jump scalars zeta^(s_k) mod p
    std::vector<Int> jump_scalar(params.L);
    for (unsigned k = 0; k < params.L; ++k)
        jump_scalar[k] = pow_mod(ctx.zeta, params.jump_set[k], ctx.modulus);

    const uint64_t dp_mask = (uint64_t(1) << params.t_bits) - 1;
    auto distinguished = [&](const GroupPoint& pt) {
        return (mpz_get_ui(pt.x.get_mpz_t()) & dp_mask) == 0;
    };

    const Int half_d = (d + 1) / 2;  // tame start exponent ceil(d/2)
    std::mt19937_64 restart_rng(params.seed ^ 0xD1B54A32D192ED03ull);
    auto random_offset = [&]() {
        gmp_randstate_t rs;
        gmp_randinit_mt(rs);
        gmp_randseed_ui(rs, restart_rng());
        Int r;
        mpz_urandomm(r.get_mpz_t(), rs, d.get_mpz_t());
        gmp_randclear(rs);
        return r;
    };

    const int W = params.walkers;
    std::vector<Walk> walks;
    walks.reserve(2 * W);
    auto start_tame = [&](int id, const Int& offset) {
        Walk w;
        w.tame = true;
        w.id = id;
        w.total = (half_d + offset) % d;
        w.point = scalar_mul(pow_mod(ctx.zeta, w.total, ctx.modulus), g, curve, &local);
        return w;
    };
    auto start_wild = [&](int id, const Int& offset) {
        Walk w;
        w.tame = false;
        w.id = id;
        w.total = offset % d;
        w.point = w.total == 0
                      ? g1
                      : scalar_mul(pow_mod(ctx.zeta, w.total, ctx.modulus), g1, curve, &local);
        return w;
    };
    for (int i = 0; i < W; ++i) {
        walks.push_back(start_tame(i, Int(i)));
        walks.push_back(start_wild(i, Int(i)));
    }

    // distinguished-point store: key -> (tame?, total exponent)
    std::unordered_map<std::string, std::pair<bool, Int>> dps;
    const uint64_t stuck_limit = 8 * (dp_mask + 1) + 64;
    const uint64_t budget = params.max_jumps * 2 * W;
    uint64_t total_steps = 0;
    std::optional<Int> answer;

    struct DpEvent {
        size_t walk_index;
        std::string key;
        bool tame;
        Int total;
    };
    const unsigned batch = 16;
    std::vector<std::vector<DpEvent>> events(walks.size());

    while (!answer && total_steps < budget) {
        int nt = observe ? 1 : std::max(1, opt.threads);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && walks.size() > 1)
        for (size_t wi = 0; wi < walks.size(); ++wi) {
            Walk& w = walks[wi];
            OpCounters tl;
            events[wi].clear();
            for (unsigned s = 0; s < batch; ++s) {
                unsigned k = partition_index(w.point, params.L) - 1;
                w.total = (w.total + params.jump_set[k]) % d;
                w.point = scalar_mul(jump_scalar[k], w.point, curve, &tl);
                ++w.steps;
                ++w.since_progress;
                if (observe) observe({w.tame, w.id, w.total, w.point});
                if (distinguished(w.point))
                    events[wi].push_back({wi, dp_key(w.point, curve), w.tame, w.total});
            }
#pragma omp critical
            {
                local.point_adds += tl.point_adds;
                local.scalar_mults += tl.scalar_mults;
            }
        }
        total_steps += batch * walks.size();
        res.jumps = total_steps;

        // merge in deterministic walker order
        for (size_t wi = 0; wi < walks.size() && !answer; ++wi) {
            for (const DpEvent& ev : events[wi]) {
                auto it = dps.find(ev.key);
                if (it == dps.end()) {
                    dps.emplace(ev.key, std::make_pair(ev.tame, ev.total));
                    walks[wi].since_progress = 0;
                    ++res.distinguished_points;
                    continue;
                }
                if (it->second.first == ev.tame) continue;  // revisit of a merged trail
                const Int& tame_total = ev.tame ? ev.total : it->second.second;
                const Int& wild_total = ev.tame ? it->second.second : ev.total;
                Int expo = (tame_total - wild_total) % d;
                if (expo < 0) expo += d;
                Int alpha = pow_mod(ctx.zeta, expo, ctx.modulus);
                if (scalar_mul(alpha, g, curve, &local) == g1) {
                    answer = alpha;
                    break;
                }
                throw Error("kangaroo collision failed verification");
            }
        }

        // restart walks that show no progress (trapped in a visited cycle)
        if (!answer) {
            for (auto& w : walks) {
                if (w.since_progress > stuck_limit) {
                    ++res.restarts;
                    w = w.tame ? start_tame(w.id, random_offset())
                               : start_wild(w.id, random_offset());
                }
            }
        }
        if (opt.progress) opt.progress(local.point_adds + local.scalar_mults);
    }

    res.alpha = answer;
    if (ops) {
        ops->point_adds += local.point_adds;
        ops->scalar_mults += local.scalar_mults;
    }
    return res;
}

}  // namespace weakdl
