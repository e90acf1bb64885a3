#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weakdl/ecgroup.hpp"
#include "weakdl/factorization.hpp"
#include "weakdl/modarith.hpp"

namespace weakdl {

// Cost model for fixed-base table exponentiation:
//   c * (log2 p + p^(1/c)) + 2 (c-1) sqrt(d)
// choose_c scans for the minimizing c >= 2, then increases c until the table
// of c * ceil(p^(1/c)) entries fits table_cap.
unsigned choose_c(const Int& p, const Int& d, uint64_t table_cap = uint64_t(1) << 24);
double kkm_cost_estimate(const Int& p, const Int& d, unsigned c);

// Fixed-base lookup table: t[i][j] = (j * b^i) * base with b = ceil(p^(1/c)).
// pow(delta) multiplies the base-b digits' entries, at most c-1 point adds.
class KkmTable {
  public:
    static KkmTable build(const GroupPoint& base, unsigned c, const CurveParams& curve,
                          OpCounters* ops = nullptr, int threads = 1);

    GroupPoint pow(const Int& delta, const CurveParams& curve, OpCounters* ops = nullptr) const;

    unsigned c() const { return c_; }
    const Int& b() const { return b_; }
    const GroupPoint& base() const { return base_; }
    const GroupPoint& entry(unsigned i, uint64_t j) const { return table_[i][j]; }
    uint64_t entries() const { return static_cast<uint64_t>(c_) * table_.front().size(); }

  private:
    KkmTable() = default;
    GroupPoint base_;
    unsigned c_ = 0;
    Int b_ = 0;
    std::vector<std::vector<GroupPoint>> table_;
};

using ProgressFn = std::function<void(uint64_t group_ops)>;

struct SolverOptions {
    uint64_t table_cap = uint64_t(1) << 24;
    int threads = 1;
    bool allow_kkm = true;
    ProgressFn progress;  // invoked roughly every 2^16 group operations
};

struct BsgsResult {
    std::optional<Int> alpha;  // nullopt: not in the order-d subgroup
    uint64_t exponentiations = 0;
    bool used_kkm = false;
};

// Implicit baby-step giant-step in the order-d subgroup of F_p*.
// Finds alpha with g1 = alpha*g and alpha = zeta^i, or proves no such i.
BsgsResult bsgs_weak(const GroupPoint& g, const GroupPoint& g1, const SubgroupContext& ctx,
                     const CurveParams& curve, OpCounters* ops = nullptr,
                     const SolverOptions& opt = {});

struct KangarooParams {
    unsigned L = 1024;          // number of partitions, power of two
    unsigned t_bits = 0;        // distinguished-point mask width, 0 = auto
    std::vector<Int> jump_set;  // empty = derive from seed
    uint64_t max_jumps = 0;     // per walk, 0 = auto: 20*sqrt(d) + 4*2^t_bits
    uint64_t seed = 1;
    bool wide_jumps = false;    // jumps up to sqrt(d) instead of sqrt(d)/2
    int walkers = 1;            // tame/wild pairs

    void validate(const Int& d) const;  // throws InvalidParams
};

KangarooParams make_kangaroo_params(const Int& d, uint64_t seed = 1, unsigned L = 1024,
                                    unsigned t_bits = 0, bool wide_jumps = false);

struct WalkStep {
    bool tame = false;
    int walker = 0;
    Int exponent;      // total known zeta-exponent of this walk
    GroupPoint point;  // current position
};
using WalkObserver = std::function<void(const WalkStep&)>;

struct KangarooResult {
    std::optional<Int> alpha;  // nullopt: inconclusive
    uint64_t jumps = 0;
    uint64_t distinguished_points = 0;
    uint64_t restarts = 0;
};

// Implicit kangaroo with distinguished points; probabilistic, never returns a
// wrong alpha (every candidate is verified against g1).
KangarooResult kangaroo_weak(const GroupPoint& g, const GroupPoint& g1,
                             const SubgroupContext& ctx, const KangarooParams& params,
                             const CurveParams& curve, OpCounters* ops = nullptr,
                             const SolverOptions& opt = {}, const WalkObserver& observe = {});

// Partition function: (x mod L) + 1 for L = 2^n.
unsigned partition_index(const GroupPoint& p, unsigned L);

enum class Strategy { bsgs, kangaroo };
enum class AuditOutcome { weak, not_weak, inconclusive };

struct AuditOptions {
    Strategy strategy = Strategy::bsgs;
    EffortBudget effort;
    std::vector<std::pair<Int, unsigned>> pm1_hints;
    uint64_t seed = 1;
    int threads = 1;
    uint64_t table_cap = uint64_t(1) << 24;
    ProgressFn progress;
};

struct AuditReport {
    std::string key_id;
    std::string curve;
    Int bound;
    std::vector<Int> subgroups_tested;
    AuditOutcome outcome = AuditOutcome::inconclusive;
    std::optional<Int> alpha;
    std::optional<Int> weak_d;
    bool complete = false;  // meaningful for not_weak
    uint64_t scalar_mults = 0;
    uint64_t point_adds = 0;
    double wall_ms = 0;
};

// Tests g1 against every subgroup in the reduced divisor set R(p, bound),
// cheapest first. Only the bsgs strategy can certify not-weak.
AuditReport audit_key(const GroupPoint& g1, const CurveParams& curve, const Int& bound,
                      const AuditOptions& opt = {});

// alpha = zeta_d^i for i = index (or uniform in [1, d]); returns (alpha, alpha*G).
std::pair<Int, GroupPoint> gen_weak_key(const CurveParams& curve, const Int& d,
                                        std::optional<Int> index, uint64_t seed);

}  // namespace weakdl
