#include "weakdl/census.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "weakdl/errors.hpp"

namespace weakdl {

double round1(double v) {
    return std::floor(std::abs(v) * 10 + 0.5) / 10 * (v < 0 ? -1 : 1);
}

CensusRow census_row(const RegistryEntry& entry, const std::vector<Int>& bounds,
                     const EffortBudget& effort,
                     const std::vector<std::pair<Int, unsigned>>& hints) {
    if (bounds.empty()) throw OutOfRange("census needs at least one bound");
    for (size_t i = 1; i < bounds.size(); ++i)
        if (bounds[i] <= bounds[i - 1]) throw OutOfRange("bounds must be ascending");

    CensusRow row;
    row.curve = entry_name(entry);
    const Int& p = entry_order(entry);
    row.b_p = bit_length(p);
    row.bounds = bounds;

    PartialFactorization f = factor_bounded(p - 1, effort);
    if (!hints.empty()) f = apply_hints(f, hints);
    if (f.complete()) {
        Int largest = 1;
        for (const auto& [q, e] : f.known) {
            (void)e;
            if (q > largest) largest = q;
        }
        row.b_pm = bit_length(largest);
    }

    for (const Int& b : bounds) {
        DivisorSet ds = divisors_up_to(f, b);
        row.complete.push_back(ds.complete);
        row.weak_keys_log2.push_back({weak_key_count_log2(f, b), !ds.complete});
        row.test_cost_log2.push_back({test_cost_log2(f, b), !ds.complete});
    }
    return row;
}

namespace {

std::string bound_label(const Int& b) {
    if (mpz_popcount(b.get_mpz_t()) == 1)
        return std::to_string(mpz_sizeinbase(b.get_mpz_t(), 2) - 1);
    return b.get_str();
}

std::string fmt1(const CensusValue& v, bool flag_lower) {
    std::ostringstream os;
    if (flag_lower && v.lower_bound) os << ">=";
    os << std::fixed << std::setprecision(1) << round1(v.value);
    return os.str();
}

}  // namespace

std::string emit_table(std::vector<CensusRow> rows, TableFormat format) {
    if (rows.empty()) return "";
    for (const auto& r : rows)
        if (r.bounds != rows.front().bounds)
            throw InvalidParams("census rows use different bound lists");

    // ascending by cost at the largest bound, ties by curve name
    std::sort(rows.begin(), rows.end(), [](const CensusRow& a, const CensusRow& b) {
        double ca = round1(a.test_cost_log2.back().value);
        double cb = round1(b.test_cost_log2.back().value);
        if (ca != cb) return ca < cb;
        return a.curve < b.curve;
    });

    const auto& bounds = rows.front().bounds;
    std::ostringstream os;

    if (format == TableFormat::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json j;
            j["curve"] = r.curve;
            j["b_p"] = r.b_p;
            if (r.b_pm)
                j["b_pm"] = *r.b_pm;
            else
                j["b_pm"] = nullptr;
            nlohmann::json cols = nlohmann::json::array();
            for (size_t i = 0; i < bounds.size(); ++i) {
                nlohmann::json col;
                col["bound_log2"] = bound_label(bounds[i]);
                col["weak_keys_log2"] = round1(r.weak_keys_log2[i].value);
                col["test_cost_log2"] = round1(r.test_cost_log2[i].value);
                col["lower_bound"] = r.weak_keys_log2[i].lower_bound;
                col["complete"] = static_cast<bool>(r.complete[i]);
                cols.push_back(col);
            }
            j["columns"] = cols;
            arr.push_back(j);
        }
        os << arr.dump(1) << "\n";
        return os.str();
    }

    if (format == TableFormat::csv) {
        os << "curve,b_p,b_pm";
        for (const auto& b : bounds) os << ",N_" << bound_label(b) << ",C_" << bound_label(b);
        os << ",complete_flags\n";
        for (const auto& r : rows) {
            os << r.curve << "," << r.b_p << ",";
            if (r.b_pm) os << *r.b_pm;
            else os << "?";
            for (size_t i = 0; i < bounds.size(); ++i) {
                os << "," << fmt1(r.weak_keys_log2[i], false) << ","
                   << fmt1(r.test_cost_log2[i], false);
            }
            os << ",";
            for (bool c : r.complete) os << (c ? '1' : '0');
            os << "\n";
        }
        return os.str();
    }

    // text
    os << std::left << std::setw(12) << "curve" << std::right << std::setw(6) << "b(p)"
       << std::setw(7) << "b(pm)";
    for (const auto& b : bounds)
        os << std::setw(10) << ("N_2^" + bound_label(b)) << std::setw(10)
           << ("C_2^" + bound_label(b));
    os << "\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(12) << r.curve << std::right << std::setw(6) << r.b_p
           << std::setw(7) << (r.b_pm ? std::to_string(*r.b_pm) : std::string("?"));
        for (size_t i = 0; i < bounds.size(); ++i)
            os << std::setw(10) << fmt1(r.weak_keys_log2[i], true) << std::setw(10)
               << fmt1(r.test_cost_log2[i], true);
        os << "\n";
    }
    return os.str();
}

}  // namespace weakdl
