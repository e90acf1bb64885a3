#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "weakdl/ecgroup.hpp"
#include "weakdl/errors.hpp"

namespace weakdl {

namespace {

struct FullCurveRecord {
    const char* name;
    const char* q;
    const char* a;
    const char* b;
    const char* gx;
    const char* gy;
    const char* p;
    unsigned h;
};

struct OrderOnlyRecord {
    const char* name;
    const char* p;
};

#include "registry_data.inc"

Int hx(const char* s) { return Int(s, 16); }

const std::map<std::string, RegistryEntry>& registry() {
    static const std::map<std::string, RegistryEntry> reg = [] {
        std::map<std::string, RegistryEntry> m;
        for (const auto& r : kFullCurves) {
            m.emplace(r.name, CurveParams::create(r.name, hx(r.q), hx(r.a), hx(r.b), hx(r.gx),
                                                  hx(r.gy), hx(r.p), r.h));
        }
        for (const auto& r : kOrderOnly) {
            Int p = hx(r.p);
            if (!probably_prime(p)) throw NotPrime(std::string(r.name) + ": order is not prime");
            m.emplace(r.name, OrderOnlyEntry{r.name, std::move(p), {}});
        }
        return m;
    }();
    return reg;
}

}  // namespace

const RegistryEntry& registry_get(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw UnknownCurve("unknown curve: " + name);
    return it->second;
}

const CurveParams& registry_curve(const std::string& name) {
    const RegistryEntry& e = registry_get(name);
    if (const auto* c = std::get_if<CurveParams>(&e)) return *c;
    throw UnknownCurve("curve " + name + " is registered order-only (no arithmetic)");
}

std::vector<std::string> registry_names(bool full_params_only) {
    std::vector<std::string> out;
    for (const auto& [name, entry] : registry()) {
        if (full_params_only && !std::holds_alternative<CurveParams>(entry)) continue;
        out.push_back(name);
    }
    return out;
}

const Int& entry_order(const RegistryEntry& e) {
    if (const auto* c = std::get_if<CurveParams>(&e)) return c->order();
    return std::get<OrderOnlyEntry>(e).p;
}

const std::string& entry_name(const RegistryEntry& e) {
    if (const auto* c = std::get_if<CurveParams>(&e)) return c->name();
    return std::get<OrderOnlyEntry>(e).name;
}

RegistryEntry parse_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open curve file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::istringstream probe(line);
            std::string leftover;
            if (probe >> leftover)
                throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto need = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) throw ParseError(path + ": missing field '" + k + "'");
        return it->second;
    };
    auto parse_signed = [](const std::string& s) {
        if (!s.empty() && s[0] == '-') return Int(-parse_int(s.substr(1)));
        return parse_int(s);
    };
    std::string name = need("name");
    Int p = parse_int(need("p"));
    if (!kv.count("q")) {
        if (!probably_prime(p)) throw NotPrime(name + ": order is not prime");
        return OrderOnlyEntry{name, std::move(p), {}};
    }
    unsigned h = kv.count("h") ? static_cast<unsigned>(parse_int(kv["h"]).get_ui()) : 1u;
    return CurveParams::create(name, parse_int(need("q")), parse_signed(need("a")),
                               parse_signed(need("b")), parse_int(need("gx")),
                               parse_int(need("gy")), std::move(p), h);
}

}  // namespace weakdl
