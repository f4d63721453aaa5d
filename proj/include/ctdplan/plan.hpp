// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctdplan/factor_model.hpp"

namespace ctd {

/// An ordered list of complete, constraint-valid combinations. Row ids are
/// 1-based positions. Provenance (seed, strength, scope, fixed values) is
/// carried so a plan file can be regenerated byte-identically.
struct Plan {
    std::vector<Combination> rows;

    std::uint64_t seed = 0;
    int strength = 0;
    std::vector<std::string> scope_names;
    std::vector<std::pair<std::string, std::string>> fixed_labels;

    std::size_t size() const { return rows.size(); }

    /// CSV with header `row_id,<factor1>,...`; byte-stable for fixed inputs.
    std::string to_csv(const FactorModel& model) const;

    /// Parse a plan CSV; the header must list the model's factors in model
    /// order and every value label must be declared. Constraint validity is
    /// checked by coverage_report, not here.
    static Plan from_csv(const FactorModel& model, std::string_view text);
};

/// Number of rows in a plan CSV, without a model (pairwise analysis only
/// needs row ids). Validates the row_id column.
std::size_t plan_row_count(std::string_view text);

}  // namespace ctd
