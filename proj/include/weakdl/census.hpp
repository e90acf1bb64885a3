#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weakdl/ecgroup.hpp"
#include "weakdl/factorization.hpp"

namespace weakdl {

struct CensusValue {
    double value = 0;
    bool lower_bound = false;  // factorization incomplete at this bound
};

struct CensusRow {
    std::string curve;
    unsigned b_p = 0;                  // bits of p
    std::optional<unsigned> b_pm;      // bits of the largest prime factor of p-1
    std::vector<Int> bounds;
    std::vector<CensusValue> weak_keys_log2;  // N_B per bound
    std::vector<CensusValue> test_cost_log2;  // C_B per bound
    std::vector<bool> complete;
};

CensusRow census_row(const RegistryEntry& entry, const std::vector<Int>& bounds,
                     const EffortBudget& effort = {},
                     const std::vector<std::pair<Int, unsigned>>& hints = {});

enum class TableFormat { text, csv, json };

// Rows sorted ascending by the cost column at the largest bound, ties by name;
// one-decimal rounding, half away from zero.
std::string emit_table(std::vector<CensusRow> rows, TableFormat format);

double round1(double v);

}  // namespace weakdl
