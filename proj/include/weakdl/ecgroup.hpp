#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "weakdl/intutil.hpp"

namespace weakdl {

// API-level operation counters. Kernels accumulate locally and flush once,
// so parallel callers see consistent totals.
struct OpCounters {
    uint64_t scalar_mults = 0;
    uint64_t point_adds = 0;
};

struct GroupPoint {
    bool infinity = true;
    Int x = 0;
    Int y = 0;

    static GroupPoint identity() { return {}; }
    static GroupPoint affine(Int px, Int py) { return {false, std::move(px), std::move(py)}; }

    bool operator==(const GroupPoint& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
};

// Short Weierstrass curve y^2 = x^3 + a x + b over F_q with base point G of
// prime order p. Construction validates all invariants.
class CurveParams {
  public:
    static CurveParams create(std::string name, Int q, Int a, Int b, Int gx, Int gy, Int p,
                              unsigned h);

    const std::string& name() const { return name_; }
    const Int& field() const { return q_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const GroupPoint& generator() const { return g_; }
    const Int& order() const { return p_; }
    unsigned cofactor() const { return h_; }

    // single-word field fast path (toy curves)
    bool small_field() const { return qs_ != 0; }
    uint64_t field_u64() const { return qs_; }

    bool on_curve(const GroupPoint& pt) const;
    size_t field_bytes() const { return (bit_length(q_) + 7) / 8; }

  private:
    CurveParams() = default;
    std::string name_;
    Int q_, a_, b_, p_;
    GroupPoint g_;
    unsigned h_ = 1;
    uint64_t qs_ = 0, as_ = 0, bs_ = 0;
    friend struct CurveOps;
};

struct OrderOnlyEntry {
    std::string name;
    Int p;  // prime subgroup order
    std::vector<std::pair<Int, unsigned>> pm1_hints;
};

using RegistryEntry = std::variant<CurveParams, OrderOnlyEntry>;

const RegistryEntry& registry_get(const std::string& name);  // throws UnknownCurve
const CurveParams& registry_curve(const std::string& name);  // throws UnknownCurve if order-only
std::vector<std::string> registry_names(bool full_params_only = false);
const Int& entry_order(const RegistryEntry& e);
const std::string& entry_name(const RegistryEntry& e);

GroupPoint add(const GroupPoint& p1, const GroupPoint& p2, const CurveParams& c,
               OpCounters* ops = nullptr);
GroupPoint negate(const GroupPoint& p, const CurveParams& c);
GroupPoint scalar_mul(const Int& k, const GroupPoint& p, const CurveParams& c,
                      OpCounters* ops = nullptr);

// SEC1: 0x04||X||Y, 0x02/0x03||X (compressed), single 0x00 for the identity.
std::vector<uint8_t> encode_point(const GroupPoint& p, const CurveParams& c,
                                  bool compressed = false);
GroupPoint decode_point(const std::vector<uint8_t>& bytes, const CurveParams& c);

std::string encode_point_hex(const GroupPoint& p, const CurveParams& c, bool compressed = false);
GroupPoint decode_point_hex(const std::string& hex, const CurveParams& c);

// Square root mod the field prime, if one exists (Tonelli-Shanks).
std::optional<Int> sqrt_mod_field(const Int& z, const CurveParams& c);

// Curve spec file: lines `field = value`, decimal or 0x-hex. Full files carry
// name,q,a,b,gx,gy,p[,h]; order-only files just name,p.
RegistryEntry parse_curve_file(const std::string& path);

}  // namespace weakdl
