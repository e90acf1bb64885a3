#include "weakdl/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "weakdl/census.hpp"
#include "weakdl/ecgroup.hpp"
#include "weakdl/errors.hpp"
#include "weakdl/weaksolve.hpp"

namespace weakdl::cli {

namespace {

namespace fs = std::filesystem;

std::string sanitize_name(const std::string& name) {
    std::string out;
    for (char ch : name)
        out.push_back(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-'
                          ? static_cast<char>(std::tolower(static_cast<unsigned char>(ch)))
                          : '-');
    return out;
}

// --hints PATH may be a hint file or a directory of <curve>.txt files;
// falls back to $WEAKDL_HINTS when unset.
std::vector<std::pair<Int, unsigned>> load_hints(std::string path, const std::string& curve) {
    if (path.empty()) {
        const char* env = std::getenv("WEAKDL_HINTS");
        if (env) path = env;
    }
    if (path.empty()) return {};
    fs::path p(path);
    if (fs::is_directory(p)) {
        fs::path file = p / (sanitize_name(curve) + ".txt");
        if (!fs::exists(file)) return {};
        return parse_hint_file(file.string());
    }
    if (!fs::exists(p)) throw ParseError("hint path does not exist: " + path);
    return parse_hint_file(p.string());
}

struct KeyInput {
    std::string hex;
    std::string origin;  // file:line for diagnostics
};

std::vector<KeyInput> read_key_batch(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open key file: " + path);
    std::vector<KeyInput> keys;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        std::string extra;
        if (ls >> extra) throw ParseError(path + ":" + std::to_string(lineno) +
                                          ": expected one key per line");
        keys.push_back({tok, path + ":" + std::to_string(lineno)});
    }
    return keys;
}

std::string outcome_name(AuditOutcome o) {
    switch (o) {
        case AuditOutcome::weak: return "weak";
        case AuditOutcome::not_weak: return "not-weak";
        default: return "inconclusive";
    }
}

std::string scalar_str(const Int& v, bool hex) {
    return hex ? "0x" + v.get_str(16) : v.get_str();
}

void print_report_json(std::ostream& out, const AuditReport& r, bool hex) {
    nlohmann::json j;
    j["key"] = r.key_id;
    j["curve"] = r.curve;
    j["bound"] = r.bound.get_str();
    j["outcome"] = outcome_name(r.outcome);
    if (r.alpha) j["alpha"] = scalar_str(*r.alpha, hex);
    if (r.weak_d) j["d"] = r.weak_d->get_str();
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& d : r.subgroups_tested) subs.push_back(d.get_str());
    j["subgroups_tested"] = subs;
    j["scalar_mults"] = r.scalar_mults;
    j["point_adds"] = r.point_adds;
    j["wall_ms"] = r.wall_ms;
    j["complete"] = r.complete;
    out << j.dump() << "\n";
}

void print_report_text(std::ostream& out, const AuditReport& r, bool hex) {
    out << r.key_id.substr(0, 18) << (r.key_id.size() > 18 ? "... " : " ") << r.curve
        << " bound=" << r.bound.get_str() << " " << outcome_name(r.outcome);
    if (r.outcome == AuditOutcome::weak)
        out << " d=" << r.weak_d->get_str() << " alpha=" << scalar_str(*r.alpha, hex);
    if (r.outcome == AuditOutcome::not_weak)
        out << (r.complete ? " (certified)" : " (factorization incomplete)");
    out << " [mults=" << r.scalar_mults << " adds=" << r.point_adds << " ms=" << int(r.wall_ms)
        << " subgroups=" << r.subgroups_tested.size() << "]\n";
}

struct CurveChoice {
    std::string name;       // registry name
    std::string file;       // or curve file path
    const CurveParams* resolve(RegistryEntry& storage, std::ostream& err) const {
        if (!file.empty()) {
            storage = parse_curve_file(file);
            if (const auto* c = std::get_if<CurveParams>(&storage)) return c;
            err << "error: curve file " << file << " is order-only; arithmetic unavailable\n";
            return nullptr;
        }
        const RegistryEntry& e = registry_get(name);
        if (const auto* c = std::get_if<CurveParams>(&e)) return c;
        err << "error: curve " << name << " is registered order-only; arithmetic unavailable\n";
        return nullptr;
    }
};

int cmd_audit(const CurveChoice& cc, const std::vector<std::string>& key_args,
              const std::string& keys_path, const std::string& bound_str,
              const std::string& strategy, const std::string& hints_path, uint64_t seed,
              uint64_t effort, int threads, uint64_t table_cap, bool json, bool hex,
              std::ostream& out, std::ostream& err) {
    RegistryEntry storage{OrderOnlyEntry{}};
    const CurveParams* curve = cc.resolve(storage, err);
    if (!curve) return kDataError;

    std::vector<KeyInput> inputs;
    for (size_t i = 0; i < key_args.size(); ++i)
        inputs.push_back({key_args[i], "arg:" + std::to_string(i + 1)});
    if (!keys_path.empty()) {
        auto batch = read_key_batch(keys_path);
        inputs.insert(inputs.end(), batch.begin(), batch.end());
    }
    if (inputs.empty()) {
        err << "error: no keys given (use --key or --keys)\n";
        return kUsageError;
    }

    std::vector<GroupPoint> points;
    points.reserve(inputs.size());
    for (const auto& k : inputs) {
        try {
            GroupPoint pt = decode_point_hex(k.hex, *curve);
            if (pt.infinity) throw IdentityInput("identity point cannot be audited");
            points.push_back(pt);
        } catch (const Error& e) {
            err << "error: bad key at " << k.origin << ": " << e.what() << "\n";
            return kDataError;
        }
    }

    AuditOptions opt;
    opt.strategy = strategy == "kangaroo" ? Strategy::kangaroo : Strategy::bsgs;
    opt.effort.rho_iterations = effort;
    opt.effort.seed = seed;
    opt.seed = seed;
    opt.table_cap = table_cap;
    opt.pm1_hints = load_hints(hints_path, curve->name());
    Int bound = parse_bound(bound_str);

    uint64_t progress_total = 0;
    std::vector<AuditReport> reports(points.size());
    bool parallel_keys = threads > 1 && points.size() > 1;
    opt.threads = parallel_keys ? 1 : std::max(1, threads);
    if (!parallel_keys)
        opt.progress = [&](uint64_t ops) {
            progress_total += ops;
            err << "\rprogress: ~" << progress_total << " group ops" << std::flush;
        };

#pragma omp parallel for schedule(dynamic) num_threads(threads) if (parallel_keys)
    for (size_t i = 0; i < points.size(); ++i) {
        AuditReport r = audit_key(points[i], *curve, bound, opt);
        r.key_id = inputs[i].hex;
        reports[i] = std::move(r);
    }
    if (!parallel_keys && progress_total) err << "\n";

    bool any_weak = false;
    for (const auto& r : reports) {
        any_weak |= r.outcome == AuditOutcome::weak;
        if (json)
            print_report_json(out, r, hex);
        else
            print_report_text(out, r, hex);
    }
    return any_weak ? kWeakFound : kOk;
}

int cmd_census(const std::vector<std::string>& curves, const std::vector<unsigned>& bound_bits,
               uint64_t effort, const std::string& hints_path, const std::string& format,
               int threads, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names = curves;
    if (names.size() == 1 && names[0] == "all") names = registry_names();
    if (names.empty()) {
        err << "error: empty curve list\n";
        return kUsageError;
    }
    std::vector<Int> bounds;
    for (unsigned b : bound_bits) {
        if (b > 4096) {
            err << "error: bound exponent too large\n";
            return kUsageError;
        }
        Int v;
        mpz_ui_pow_ui(v.get_mpz_t(), 2, b);
        bounds.push_back(v);
    }

    EffortBudget eff;
    eff.rho_iterations = effort;
    std::vector<CensusRow> rows(names.size());
    std::string failure;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads)) \
    if (threads > 1 && names.size() > 1)
    for (size_t i = 0; i < names.size(); ++i) {
        try {
            const RegistryEntry& entry = registry_get(names[i]);
            auto hints = load_hints(hints_path, names[i]);
            rows[i] = census_row(entry, bounds, eff, hints);
        } catch (const std::exception& e) {
#pragma omp critical
            failure = names[i] + ": " + e.what();
        }
    }
    if (!failure.empty()) {
        err << "error: " << failure << "\n";
        return kDataError;
    }

    TableFormat fmt = format == "csv"    ? TableFormat::csv
                      : format == "json" ? TableFormat::json
                                         : TableFormat::text;
    out << emit_table(std::move(rows), fmt);
    return kOk;
}

int cmd_genweak(const std::string& curve_name, const std::string& d_str,
                const std::string& index_str, bool random_index, uint64_t seed, bool hex,
                bool compressed, std::ostream& out, std::ostream& err) {
    const CurveParams& curve = registry_curve(curve_name);
    Int d = parse_bound(d_str);
    std::optional<Int> index;
    if (!random_index) {
        if (index_str.empty()) {
            err << "error: give --index I or --random\n";
            return kUsageError;
        }
        index = parse_bound(index_str);
    }
    auto [alpha, pub] = gen_weak_key(curve, d, index, seed);
    out << "alpha " << scalar_str(alpha, hex) << "\n";
    out << "pubkey " << encode_point_hex(pub, curve, compressed) << "\n";
    return kOk;
}

int cmd_factor(const std::string& curve_name, const std::string& n_str, uint64_t effort,
               const std::string& hints_path, std::ostream& out, std::ostream& err) {
    Int n;
    std::string hint_curve;
    if (!curve_name.empty()) {
        n = entry_order(registry_get(curve_name)) - 1;
        hint_curve = curve_name;
        out << "p-1 for " << curve_name << " = " << n.get_str() << "\n";
    } else if (!n_str.empty()) {
        n = parse_bound(n_str);
    } else {
        err << "error: give --curve or --n\n";
        return kUsageError;
    }
    if (n < 1) {
        err << "error: n must be >= 1\n";
        return kDataError;
    }
    EffortBudget eff;
    eff.rho_iterations = effort;
    PartialFactorization f = factor_bounded(n, eff);
    if (!hint_curve.empty()) f = apply_hints(f, load_hints(hints_path, hint_curve));
    if (f.known.size() == 1 && f.known[0].second == 1 && f.complete()) {
        out << n.get_str() << " is prime\n";
        return kOk;
    }
    out << n.get_str() << " = " << format_factorization(f) << "\n";
    if (!f.complete()) out << "cofactor " << f.cofactor.get_str() << " remains composite\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"audit discrete-log public keys for multiplicative-subgroup weakness"};
    app.require_subcommand(1);

    // audit
    auto* audit = app.add_subcommand("audit", "test public keys against a weakness bound");
    CurveChoice cc;
    std::vector<std::string> key_args;
    std::string keys_path, bound_str = "4294967296", strategy = "bsgs", hints_path;
    uint64_t seed = 1, effort = 4'000'000, table_cap = uint64_t(1) << 24;
    int threads = 1;
    bool json = false, hex = false;
    auto* copt = audit->add_option("--curve", cc.name, "registry curve name");
    audit->add_option("--curve-file", cc.file, "curve spec file")->excludes(copt);
    audit->add_option("--key", key_args, "hex SEC1 public key (repeatable)");
    audit->add_option("--keys", keys_path, "file with one hex key per line");
    audit->add_option("--bound", bound_str, "weakness bound (integer or 2^k)");
    audit->add_option("--strategy", strategy, "bsgs | kangaroo")
        ->check(CLI::IsMember({"bsgs", "kangaroo"}));
    audit->add_option("--hints", hints_path, "p-1 factor hint file or directory");
    audit->add_option("--seed", seed, "deterministic seed");
    audit->add_option("--effort", effort, "rho iteration budget");
    audit->add_option("--threads", threads, "parallelism across keys and subgroups");
    audit->add_option("--table-cap", table_cap, "max lookup-table entries");
    audit->add_flag("--json", json, "JSON-lines output");
    audit->add_flag("--hex", hex, "print scalars in hex");

    // census
    auto* census = app.add_subcommand("census", "weak-key census over registry curves");
    std::vector<std::string> census_curves;
    std::vector<unsigned> census_bounds = {32, 64, 128, 160};
    std::string census_format = "text", census_hints;
    uint64_t census_effort = 4'000'000;
    int census_threads = 1;
    census->add_option("--curves", census_curves, "curve names or 'all'")
        ->required()
        ->delimiter(',');
    census->add_option("--bounds", census_bounds, "bound exponents k (B = 2^k)")->delimiter(',');
    census->add_option("--effort", census_effort, "rho iteration budget");
    census->add_option("--hints", census_hints, "hint file or directory");
    census->add_option("--format", census_format, "text | csv | json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    census->add_option("--threads", census_threads, "parallelism across curves");

    // genweak
    auto* genweak = app.add_subcommand("genweak", "generate a weak key in a chosen subgroup");
    std::string gw_curve, gw_d, gw_index;
    bool gw_random = false, gw_hex = false, gw_compressed = false;
    uint64_t gw_seed = 1;
    genweak->add_option("--curve", gw_curve, "registry curve name")->required();
    genweak->add_option("--d", gw_d, "subgroup order (divisor of p-1)")->required();
    genweak->add_option("--index", gw_index, "exponent index in [1, d]");
    genweak->add_flag("--random", gw_random, "choose the index uniformly");
    genweak->add_option("--seed", gw_seed, "seed for --random");
    genweak->add_flag("--hex", gw_hex, "print alpha in hex");
    genweak->add_flag("--compressed", gw_compressed, "compressed pubkey encoding");

    // factor
    auto* factor = app.add_subcommand("factor", "factor p-1 (or an arbitrary integer)");
    std::string f_curve, f_n, f_hints;
    uint64_t f_effort = 4'000'000;
    factor->add_option("--curve", f_curve, "registry curve name");
    factor->add_option("--n", f_n, "integer to factor");
    factor->add_option("--effort", f_effort, "rho iteration budget");
    factor->add_option("--hints", f_hints, "hint file or directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (audit->parsed())
            return cmd_audit(cc, key_args, keys_path, bound_str, strategy, hints_path, seed,
                             effort, threads, table_cap, json, hex, out, err);
        if (census->parsed())
            return cmd_census(census_curves, census_bounds, census_effort, census_hints,
                              census_format, census_threads, out, err);
        if (genweak->parsed())
            return cmd_genweak(gw_curve, gw_d, gw_index, gw_random, gw_seed, gw_hex,
                               gw_compressed, out, err);
        if (factor->parsed())
            return cmd_factor(f_curve, f_n, f_effort, f_hints, out, err);
    } catch (const UnknownCurve& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}

}  // namespace weakdl::cli
