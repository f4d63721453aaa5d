// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctdplan/factor_model.hpp"
#include "ctdplan/plan.hpp"

namespace ctd {

/// What must be covered: interaction strength k, the scoped factors whose
/// value interactions matter, and pinned values for out-of-experiment factors.
struct CoverageRequirement {
    int strength = 2;
    std::vector<int> scope;                   // factor indices, ascending
    std::vector<std::pair<int, int>> fixed;   // (factor, value), ascending by factor

    /// Build and validate a requirement. An empty scope_names means "all
    /// factors not pinned by fixed_labels".
    static CoverageRequirement make(
        const FactorModel& model, int strength,
        const std::vector<std::string>& scope_names = {},
        const std::vector<std::pair<std::string, std::string>>& fixed_labels = {});

    std::vector<std::string> scope_labels(const FactorModel& model) const;
    std::vector<std::pair<std::string, std::string>> fixed_as_labels(const FactorModel& model) const;
};

/// A value assignment to exactly k scoped factors.
struct Interaction {
    std::vector<std::pair<int, int>> entries;  // (factor, value), ascending by factor

    bool operator==(const Interaction&) const = default;
};

std::string interaction_to_string(const FactorModel& model, const Interaction& t);

/// True iff some complete, constraint-valid combination extends
/// t together with the requirement's fixed values. Decided by depth-first
/// search over the unassigned factors with constraint pruning.
bool interaction_feasible(const FactorModel& model, const CoverageRequirement& req,
                          const Interaction& t);

/// All feasible k-way interactions over the scoped factors, in deterministic
/// order: k-subsets of scope lexicographically, then value tuples with the
/// first factor varying slowest.
std::vector<Interaction> required_interactions(const FactorModel& model,
                                               const CoverageRequirement& req);

/// The constraint-infeasible interactions excluded from the requirement
/// (surfaced as a CLI diagnostic).
std::vector<Interaction> excluded_interactions(const FactorModel& model,
                                               const CoverageRequirement& req);

struct CoverageReport {
    std::size_t required = 0;
    std::size_t covered = 0;
    std::vector<Interaction> missing;
    double coverage_ratio = 0.0;
};

/// Check a plan against the requirement by direct agreement between each
/// required interaction and each row. Every row must be complete, valid, and
/// consistent with the fixed values; a bad row raises an error naming it.
CoverageReport coverage_report(const FactorModel& model, const CoverageRequirement& req,
                               const Plan& plan);

}  // namespace ctd
