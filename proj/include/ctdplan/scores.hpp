// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctdplan/plan.hpp"

namespace ctd {

struct Observation {
    int row_id = 0;            // 1-based plan row
    std::string sample_id;
    int score = 0;             // 0 or 1
};

/// Binary score observations keyed by plan row. Immutable after ingestion.
struct ScoreDataset {
    std::vector<Observation> observations;
    std::size_t plan_rows = 0;

    /// Parse and validate a `row_id,sample_id,score` CSV against the plan.
    static ScoreDataset ingest_csv(const Plan& plan, std::string_view text);

    /// Same, validating row ids against a bare row count (pairwise analysis
    /// does not need the combinations themselves).
    static ScoreDataset ingest_csv(std::size_t plan_rows, std::string_view text);

    std::string to_csv() const;
};

struct RowStats {
    int row_id = 0;
    std::int64_t n = 0;
    std::int64_t successes = 0;
    double mean = 0.0;
    std::optional<double> std_dev;  // absent when n == 1
};

struct SampleStats {
    std::vector<RowStats> rows;       // scored rows, ascending row_id
    std::vector<int> unscored_rows;   // plan rows with no observations
};

/// Per-row observation count, proportion of 1s, and sample standard deviation
/// (n-1 denominator). Rows without observations are listed, not computed.
SampleStats sample_stats(const ScoreDataset& dataset);

}  // namespace ctd
