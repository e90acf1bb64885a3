// Compares the serial reference paths against the OpenMP kernels.
#include <chrono>
#include <iostream>
#include <vector>

#include <omp.h>

#include "weakdl/census.hpp"
#include "weakdl/ecgroup.hpp"
#include "weakdl/weaksolve.hpp"

using namespace weakdl;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
    std::printf("%-34s serial %9.1f ms   omp %9.1f ms   speedup %.2fx\n", name.c_str(),
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    std::printf("threads: %d\n\n", threads);

    {  // KKM table construction
        const CurveParams& curve = registry_curve("secp256k1");
        unsigned c = 18;
        auto t0 = Clock::now();
        auto ts = KkmTable::build(curve.generator(), c, curve, nullptr, 1);
        double serial = ms_since(t0);
        t0 = Clock::now();
        auto tp = KkmTable::build(curve.generator(), c, curve, nullptr, threads);
        double par = ms_since(t0);
        bool same = true;
        for (unsigned i = 0; i < c && same; ++i)
            for (uint64_t j = 0; j < 64; j += 7)
                if (!(ts.entry(i, j) == tp.entry(i, j))) same = false;
        report("kkm_build c=18 (secp256k1)", serial, par);
        if (!same) std::printf("  MISMATCH between serial and parallel tables!\n");
    }

    {  // BSGS scan in a ~2^20 subgroup of F_p* for secp256k1
        const CurveParams& curve = registry_curve("secp256k1");
        PrimeModulus pm(curve.order());
        Int d = 752152;  // 2^3 * 149 * 631 divides p-1
        SubgroupContext ctx = subgroup_generator(
            pm, d, {{Int(2), 3u}, {Int(149), 1u}, {Int(631), 1u}});
        auto [alpha, g1] = gen_weak_key(curve, d, Int(d - 17), 1);
        SolverOptions sser, spar;
        spar.threads = threads;
        auto t0 = Clock::now();
        auto rs = bsgs_weak(curve.generator(), g1, ctx, curve, nullptr, sser);
        double serial = ms_since(t0);
        t0 = Clock::now();
        auto rp = bsgs_weak(curve.generator(), g1, ctx, curve, nullptr, spar);
        double par = ms_since(t0);
        report("bsgs_weak d=752152 (secp256k1)", serial, par);
        if (rs.alpha != rp.alpha || *rs.alpha != alpha)
            std::printf("  MISMATCH between serial and parallel results!\n");
    }

    {  // kangaroo herd where each jump is a full-width multiplication
        const CurveParams& curve = registry_curve("secp256k1");
        PrimeModulus pm(curve.order());
        Int d = 752152;
        SubgroupContext ctx = subgroup_generator(
            pm, d, {{Int(2), 3u}, {Int(149), 1u}, {Int(631), 1u}});
        double serial = 0, par = 0;
        int solved_serial = 0, solved_par = 0;
        const int trials = 6;
        for (int i = 0; i < trials; ++i) {
            auto [alpha, g1] = gen_weak_key(curve, d, std::nullopt, 1000 + i);
            KangarooParams kp = make_kangaroo_params(d, 7);
            auto t0 = Clock::now();
            auto r = kangaroo_weak(curve.generator(), g1, ctx, kp, curve);
            serial += ms_since(t0);
            solved_serial += r.alpha.has_value();
            KangarooParams hp = make_kangaroo_params(d, 7);
            hp.walkers = 2 * threads;
            SolverOptions so;
            so.threads = threads;
            t0 = Clock::now();
            auto rh = kangaroo_weak(curve.generator(), g1, ctx, hp, curve, nullptr, so);
            par += ms_since(t0);
            solved_par += rh.alpha.has_value();
        }
        report("kangaroo d=752152 x6 (secp256k1)", serial, par);
        std::printf("  solved: serial %d/%d, herd %d/%d\n", solved_serial, trials, solved_par,
                    trials);
    }

    {  // census across every registry curve
        auto names = registry_names();
        std::vector<Int> bounds;
        for (unsigned b : {32u, 64u}) {
            Int v;
            mpz_ui_pow_ui(v.get_mpz_t(), 2, b);
            bounds.push_back(v);
        }
        auto run = [&](int nt) {
            std::vector<CensusRow> rows(names.size());
#pragma omp parallel for schedule(dynamic) num_threads(nt) if (nt > 1)
            for (size_t i = 0; i < names.size(); ++i)
                rows[i] = census_row(registry_get(names[i]), bounds, {});
            return rows;
        };
        auto t0 = Clock::now();
        run(1);
        double serial = ms_since(t0);
        t0 = Clock::now();
        run(threads);
        double par = ms_since(t0);
        report("census 2 bounds, all curves", serial, par);
    }
    return 0;
}
