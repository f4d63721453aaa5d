// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <cstdint>

#include "ctdplan/coverage.hpp"
#include "ctdplan/plan.hpp"

namespace ctd {

/// Greedy covering-array construction (AETG style). Repeatedly builds 50
/// candidate rows, each grown from a randomly chosen uncovered interaction by
/// assigning the remaining factors one at a time with the value that covers
/// the most still-uncovered interactions, and keeps the candidate covering the
/// most. Deterministic for a fixed (model, requirement, seed); the result
/// always passes coverage_report with ratio 1.
Plan generate_plan(const FactorModel& model, const CoverageRequirement& req, std::uint64_t seed);

}  // namespace ctd
