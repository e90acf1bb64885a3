#include "weakdl/ecgroup.hpp"

#include <algorithm>
#include <array>
#include <cstring>

#include "weakdl/errors.hpp"

namespace weakdl {

namespace {

// ---------- mpz Jacobian engine ----------

struct JacM {
    Int X = 1, Y = 1, Z = 0;  // Z == 0 encodes the identity
    bool inf() const { return Z == 0; }
};

struct MpzWork {
    const Int& q;
    const Int& a;
    Int t1, t2, t3, t4, t5, t6, t7;
    explicit MpzWork(const CurveParams& c) : q(c.field()), a(c.a()) {}

    void reduce(Int& v) {
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
    }

    void dbl(JacM& p) {
        if (p.inf() || p.Y == 0) {
            p.Z = 0;
            return;
        }
        // S = 4 X Y^2, M = 3 X^2 + a Z^4
        t1 = p.Y * p.Y;
        reduce(t1);                  // Y^2
        t2 = 4 * p.X * t1;
        reduce(t2);                  // S
        t3 = p.Z * p.Z;
        reduce(t3);                  // Z^2
        t4 = t3 * t3;
        reduce(t4);                  // Z^4
        t5 = 3 * p.X * p.X + a * t4;
        reduce(t5);                  // M
        t6 = t5 * t5 - 2 * t2;
        reduce(t6);                  // X'
        t7 = 8 * t1 * t1;
        reduce(t7);                  // 8 Y^4
        p.Z = 2 * p.Y * p.Z;
        reduce(p.Z);
        p.Y = t5 * (t2 - t6) - t7;
        reduce(p.Y);
        p.X = t6;
    }

    // p += r where r is affine (rx, ry), r not identity
    void add_mixed(JacM& p, const Int& rx, const Int& ry) {
        if (p.inf()) {
            p.X = rx;
            p.Y = ry;
            p.Z = 1;
            return;
        }
        t1 = p.Z * p.Z;
        reduce(t1);            // Z1^2
        t2 = rx * t1;
        reduce(t2);            // U2
        t3 = ry * t1 * p.Z;
        reduce(t3);            // S2
        t2 -= p.X;
        reduce(t2);            // H
        t3 -= p.Y;
        reduce(t3);            // R
        if (t2 == 0) {
            if (t3 == 0) {
                dbl(p);
            } else {
                p.Z = 0;
            }
            return;
        }
        t4 = t2 * t2;
        reduce(t4);            // H^2
        t5 = t4 * t2;
        reduce(t5);            // H^3
        t6 = p.X * t4;
        reduce(t6);            // U1 H^2
        t7 = t3 * t3 - t5 - 2 * t6;
        reduce(t7);            // X3
        p.Y = t3 * (t6 - t7) - p.Y * t5;
        reduce(p.Y);
        p.Z = p.Z * t2;
        reduce(p.Z);
        p.X = t7;
    }

    GroupPoint to_affine(const JacM& p) {
        if (p.inf()) return GroupPoint::identity();
        Int zi, zi2;
        mpz_invert(zi.get_mpz_t(), p.Z.get_mpz_t(), q.get_mpz_t());
        zi2 = zi * zi;
        reduce(zi2);
        Int x = p.X * zi2;
        reduce(x);
        Int y = p.Y * zi2 * zi;
        reduce(y);
        return GroupPoint::affine(std::move(x), std::move(y));
    }
};

// ---------- single-word engine (field fits in 62 bits) ----------

struct Jac64 {
    uint64_t X = 1, Y = 1, Z = 0;
    bool inf() const { return Z == 0; }
};

struct U64Field {
    uint64_t q;
    uint64_t mul(uint64_t x, uint64_t y) const {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(x) * y) % q);
    }
    uint64_t add(uint64_t x, uint64_t y) const {
        uint64_t s = x + y;
        return s >= q ? s - q : s;
    }
    uint64_t sub(uint64_t x, uint64_t y) const { return x >= y ? x - y : x + q - y; }
};

struct U64Curve {
    U64Field f;
    uint64_t a;

    void dbl(Jac64& p) const {
        if (p.inf() || p.Y == 0) {
            p.Z = 0;
            return;
        }
        uint64_t y2 = f.mul(p.Y, p.Y);
        uint64_t s = f.mul(f.add(f.add(p.X, p.X), f.add(p.X, p.X)), y2);  // 4XY^2
        uint64_t z2 = f.mul(p.Z, p.Z);
        uint64_t z4 = f.mul(z2, z2);
        uint64_t m = f.add(f.mul(3 % f.q, f.mul(p.X, p.X)), f.mul(a, z4));
        uint64_t x3 = f.sub(f.mul(m, m), f.add(s, s));
        uint64_t y4 = f.mul(y2, y2);
        uint64_t y3 = f.sub(f.mul(m, f.sub(s, x3)), f.mul(8 % f.q, y4));
        p.Z = f.mul(f.add(p.Y, p.Y), p.Z);
        p.X = x3;
        p.Y = y3;
    }

    void add_mixed(Jac64& p, uint64_t rx, uint64_t ry) const {
        if (p.inf()) {
            p.X = rx;
            p.Y = ry;
            p.Z = 1;
            return;
        }
        uint64_t z2 = f.mul(p.Z, p.Z);
        uint64_t u2 = f.mul(rx, z2);
        uint64_t s2 = f.mul(ry, f.mul(z2, p.Z));
        uint64_t h = f.sub(u2, p.X);
        uint64_t r = f.sub(s2, p.Y);
        if (h == 0) {
            if (r == 0)
                dbl(p);
            else
                p.Z = 0;
            return;
        }
        uint64_t h2 = f.mul(h, h);
        uint64_t h3 = f.mul(h2, h);
        uint64_t u1h2 = f.mul(p.X, h2);
        uint64_t x3 = f.sub(f.sub(f.mul(r, r), h3), f.add(u1h2, u1h2));
        uint64_t y3 = f.sub(f.mul(r, f.sub(u1h2, x3)), f.mul(p.Y, h3));
        p.Z = f.mul(p.Z, h);
        p.X = x3;
        p.Y = y3;
    }

    GroupPoint to_affine(const Jac64& p) const {
        if (p.inf()) return GroupPoint::identity();
        // inverse via Fermat
        uint64_t zi = 1, base = p.Z, e = f.q - 2;
        while (e) {
            if (e & 1) zi = f.mul(zi, base);
            base = f.mul(base, base);
            e >>= 1;
        }
        uint64_t zi2 = f.mul(zi, zi);
        return GroupPoint::affine(Int(static_cast<unsigned long>(f.mul(p.X, zi2))),
                                  Int(static_cast<unsigned long>(f.mul(p.Y, f.mul(zi2, zi)))));
    }
};

}  // namespace

struct CurveOps {
    static U64Curve small(const CurveParams& c) {
        return U64Curve{{c.qs_}, c.as_};
    }
    static void init_small(CurveParams& c) {
        if (mpz_fits_ulong_p(c.q_.get_mpz_t()) && c.q_ < Int(uint64_t(1) << 62)) {
            c.qs_ = c.q_.get_ui();
            c.as_ = c.a_.get_ui();
            c.bs_ = c.b_.get_ui();
        }
    }
};

namespace {

// Multiplies by the exponent as given (no reduction); e >= 0.
GroupPoint scalar_mul_raw(const Int& e, const GroupPoint& p, const CurveParams& c) {
    if (p.infinity || e == 0) return GroupPoint::identity();
    size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);

    if (c.small_field()) {
        U64Curve u = CurveOps::small(c);
        uint64_t px = p.x.get_ui(), py = p.y.get_ui();
        Jac64 acc;
        for (size_t i = nbits; i-- > 0;) {
            u.dbl(acc);
            if (mpz_tstbit(e.get_mpz_t(), i)) u.add_mixed(acc, px, py);
        }
        return u.to_affine(acc);
    }

    MpzWork w(c);
    JacM acc;
    for (size_t i = nbits; i-- > 0;) {
        w.dbl(acc);
        if (mpz_tstbit(e.get_mpz_t(), i)) w.add_mixed(acc, p.x, p.y);
    }
    return w.to_affine(acc);
}

// Public-contract multiply: k reduced into [0, p) first.
GroupPoint scalar_mul_impl(const Int& k, const GroupPoint& p, const CurveParams& c) {
    Int e;
    mpz_mod(e.get_mpz_t(), k.get_mpz_t(), c.order().get_mpz_t());
    return scalar_mul_raw(e, p, c);
}

GroupPoint add_impl(const GroupPoint& p1, const GroupPoint& p2, const CurveParams& c) {
    if (p1.infinity) return p2;
    if (p2.infinity) return p1;

    if (c.small_field()) {
        U64Curve u = CurveOps::small(c);
        Jac64 acc{p1.x.get_ui(), p1.y.get_ui(), 1};
        u.add_mixed(acc, p2.x.get_ui(), p2.y.get_ui());
        return u.to_affine(acc);
    }
    MpzWork w(c);
    JacM acc{p1.x, p1.y, 1};
    w.add_mixed(acc, p2.x, p2.y);
    return w.to_affine(acc);
}

}  // namespace

CurveParams CurveParams::create(std::string name, Int q, Int a, Int b, Int gx, Int gy, Int p,
                                unsigned h) {
    CurveParams c;
    c.name_ = std::move(name);
    c.q_ = std::move(q);
    c.a_ = std::move(a);
    c.b_ = std::move(b);
    c.p_ = std::move(p);
    c.h_ = h;
    if (c.q_ < 3 || !probably_prime(c.q_)) throw NotPrime("field prime q is not prime");
    if (c.p_ < 3 || !probably_prime(c.p_)) throw NotPrime("group order p is not prime");
    mpz_mod(c.a_.get_mpz_t(), c.a_.get_mpz_t(), c.q_.get_mpz_t());
    mpz_mod(c.b_.get_mpz_t(), c.b_.get_mpz_t(), c.q_.get_mpz_t());
    Int disc = (4 * c.a_ * c.a_ * c.a_ + 27 * c.b_ * c.b_) % c.q_;
    if (disc == 0) throw InvalidParams("curve is singular");
    if (h < 1) throw InvalidParams("cofactor must be >= 1");
    CurveOps::init_small(c);
    c.g_ = GroupPoint::affine(std::move(gx), std::move(gy));
    if (!c.on_curve(c.g_)) throw PointNotOnCurve("base point not on curve");
    if (!scalar_mul_raw(c.p_, c.g_, c).infinity)
        throw InvalidParams("base point order is not p");
    return c;
}

bool CurveParams::on_curve(const GroupPoint& pt) const {
    if (pt.infinity) return true;
    if (pt.x < 0 || pt.x >= q_ || pt.y < 0 || pt.y >= q_) return false;
    Int lhs = (pt.y * pt.y) % q_;
    Int rhs = (pt.x * pt.x * pt.x + a_ * pt.x + b_) % q_;
    return lhs == rhs;
}

GroupPoint add(const GroupPoint& p1, const GroupPoint& p2, const CurveParams& c, OpCounters* ops) {
    if (ops) ops->point_adds += 1;
    return add_impl(p1, p2, c);
}

GroupPoint negate(const GroupPoint& p, const CurveParams& c) {
    if (p.infinity) return p;
    return GroupPoint::affine(p.x, p.y == 0 ? Int(0) : Int(c.field() - p.y));
}

GroupPoint scalar_mul(const Int& k, const GroupPoint& p, const CurveParams& c, OpCounters* ops) {
    if (ops) ops->scalar_mults += 1;
    return scalar_mul_impl(k, p, c);
}

// ---------- SEC1 ----------

namespace {

void append_fixed(std::vector<uint8_t>& out, const Int& v, size_t width) {
    std::vector<uint8_t> tmp(width, 0);
    size_t count = 0;
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    // mpz_export writes `count` bytes from the front; shift right-aligned
    if (count > width) throw BadEncoding("coordinate wider than the field");
    std::rotate(tmp.begin(), tmp.begin() + count, tmp.end());
    out.insert(out.end(), tmp.begin(), tmp.end());
}

Int import_bytes(const uint8_t* data, size_t len) {
    Int v;
    mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, data);
    return v;
}

}  // namespace

std::vector<uint8_t> encode_point(const GroupPoint& p, const CurveParams& c, bool compressed) {
    if (p.infinity) return {0x00};
    std::vector<uint8_t> out;
    size_t w = c.field_bytes();
    if (compressed) {
        out.push_back(mpz_odd_p(p.y.get_mpz_t()) ? 0x03 : 0x02);
        append_fixed(out, p.x, w);
    } else {
        out.push_back(0x04);
        append_fixed(out, p.x, w);
        append_fixed(out, p.y, w);
    }
    return out;
}

std::optional<Int> sqrt_mod_field(const Int& z, const CurveParams& c) {
    const Int& q = c.field();
    Int v = z % q;
    if (v < 0) v += q;
    if (v == 0) return Int(0);
    if (mpz_legendre(v.get_mpz_t(), q.get_mpz_t()) != 1) return std::nullopt;
    Int r;
    if (mpz_tstbit(q.get_mpz_t(), 0) && mpz_tstbit(q.get_mpz_t(), 1)) {
        // q == 3 mod 4
        Int e = (q + 1) / 4;
        mpz_powm(r.get_mpz_t(), v.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
        return r;
    }
    // Tonelli-Shanks
    Int s = q - 1;
    unsigned e2 = 0;
    while (mpz_even_p(s.get_mpz_t())) {
        s /= 2;
        ++e2;
    }
    Int n = 2;
    while (mpz_legendre(n.get_mpz_t(), q.get_mpz_t()) != -1) ++n;
    Int x, b, g, t;
    mpz_powm(x.get_mpz_t(), v.get_mpz_t(), Int((s + 1) / 2).get_mpz_t(), q.get_mpz_t());
    mpz_powm(b.get_mpz_t(), v.get_mpz_t(), s.get_mpz_t(), q.get_mpz_t());
    mpz_powm(g.get_mpz_t(), n.get_mpz_t(), s.get_mpz_t(), q.get_mpz_t());
    unsigned r2 = e2;
    while (b != 1) {
        unsigned m = 0;
        t = b;
        while (t != 1) {
            t = (t * t) % q;
            ++m;
            if (m == r2) return std::nullopt;
        }
        Int gs = g;
        for (unsigned i = 0; i + m + 1 < r2; ++i) gs = (gs * gs) % q;
        x = (x * gs) % q;
        g = (gs * gs) % q;
        b = (b * g) % q;
        r2 = m;
    }
    return x;
}

GroupPoint decode_point(const std::vector<uint8_t>& bytes, const CurveParams& c) {
    if (bytes.empty()) throw BadEncoding("empty point encoding");
    size_t w = c.field_bytes();
    GroupPoint p;
    if (bytes[0] == 0x00) {
        if (bytes.size() != 1) throw BadEncoding("identity encoding must be a single 00 byte");
        return GroupPoint::identity();
    }
    if (bytes[0] == 0x04) {
        if (bytes.size() != 1 + 2 * w) throw BadEncoding("bad uncompressed point length");
        p = GroupPoint::affine(import_bytes(bytes.data() + 1, w),
                               import_bytes(bytes.data() + 1 + w, w));
        if (p.x >= c.field() || p.y >= c.field()) throw BadEncoding("coordinate out of range");
        if (!c.on_curve(p)) throw PointNotOnCurve("point not on curve");
    } else if (bytes[0] == 0x02 || bytes[0] == 0x03) {
        if (bytes.size() != 1 + w) throw BadEncoding("bad compressed point length");
        Int x = import_bytes(bytes.data() + 1, w);
        if (x >= c.field()) throw BadEncoding("coordinate out of range");
        Int rhs = (x * x * x + c.a() * x + c.b()) % c.field();
        auto y = sqrt_mod_field(rhs, c);
        if (!y) throw PointNotOnCurve("no point with this x-coordinate");
        bool want_odd = bytes[0] == 0x03;
        bool is_odd = mpz_odd_p(y->get_mpz_t()) != 0;
        if (is_odd != want_odd) *y = c.field() - *y;
        p = GroupPoint::affine(std::move(x), std::move(*y));
        if (!c.on_curve(p)) throw PointNotOnCurve("decompression failed");
    } else {
        throw BadEncoding("unknown point encoding prefix");
    }
    if (!scalar_mul_raw(c.order(), p, c).infinity)
        throw WrongSubgroup("point is not in the order-p subgroup");
    return p;
}

std::string encode_point_hex(const GroupPoint& p, const CurveParams& c, bool compressed) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (uint8_t b : encode_point(p, c, compressed)) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

GroupPoint decode_point_hex(const std::string& hex, const CurveParams& c) {
    std::string h = hex;
    if (h.rfind("0x", 0) == 0 || h.rfind("0X", 0) == 0) h = h.substr(2);
    if (h.size() % 2 != 0) throw BadEncoding("odd-length hex point");
    auto nyb = [](char ch) -> int {
        if (ch >= '0' && ch <= '9') return ch - '0';
        if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
        if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
        return -1;
    };
    std::vector<uint8_t> bytes;
    bytes.reserve(h.size() / 2);
    for (size_t i = 0; i < h.size(); i += 2) {
        int hi = nyb(h[i]), lo = nyb(h[i + 1]);
        if (hi < 0 || lo < 0) throw BadEncoding("bad hex digit in point");
        bytes.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return decode_point(bytes, c);
}

}  // namespace weakdl
