// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/scores.hpp"

#include <cmath>
#include <set>

#include "ctdplan/csv.hpp"
#include "ctdplan/error.hpp"

namespace ctd {

ScoreDataset ScoreDataset::ingest_csv(const Plan& plan, std::string_view text) {
    return ingest_csv(plan.size(), text);
}

ScoreDataset ScoreDataset::ingest_csv(std::size_t plan_rows, std::string_view text) {
    const auto records = csv::parse(text);
    if (records.empty()) throw ValidationError("scores file is empty");
    const auto& header = records[0];
    if (header != std::vector<std::string>{"row_id", "sample_id", "score"}) {
        throw ValidationError("scores file header must be row_id,sample_id,score");
    }
    if (records.size() == 1) throw ValidationError("scores file has no observations");

    ScoreDataset ds;
    ds.plan_rows = plan_rows;
    std::set<std::pair<int, std::string>> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != 3) {
            throw ValidationError("scores line " + std::to_string(r + 1) +
                                  ": expected 3 fields, got " + std::to_string(rec.size()));
        }
        Observation obs;
        try {
            std::size_t pos = 0;
            obs.row_id = std::stoi(rec[0], &pos);
            if (pos != rec[0].size()) throw std::invalid_argument(rec[0]);
        } catch (const std::exception&) {
            throw ValidationError("scores line " + std::to_string(r + 1) +
                                  ": row_id must be an integer, got \"" + rec[0] + "\"");
        }
        if (obs.row_id < 1 || static_cast<std::size_t>(obs.row_id) > plan_rows) {
            throw ValidationError("scores line " + std::to_string(r + 1) + ": unknown row " +
                                  rec[0]);
        }
        obs.sample_id = rec[1];
        if (rec[2] == "0") {
            obs.score = 0;
        } else if (rec[2] == "1") {
            obs.score = 1;
        } else {
            throw ValidationError("scores line " + std::to_string(r + 1) +
                                  ": score must be 0 or 1, got \"" + rec[2] + "\"");
        }
        if (!seen.emplace(obs.row_id, obs.sample_id).second) {
            throw ValidationError("scores line " + std::to_string(r + 1) +
                                  ": duplicate observation (row " + rec[0] + ", sample \"" +
                                  rec[1] + "\")");
        }
        ds.observations.push_back(std::move(obs));
    }
    return ds;
}

std::string ScoreDataset::to_csv() const {
    std::string out = "row_id,sample_id,score\n";
    for (const auto& obs : observations) {
        out += csv::join({std::to_string(obs.row_id), obs.sample_id, std::to_string(obs.score)});
        out += '\n';
    }
    return out;
}

SampleStats sample_stats(const ScoreDataset& dataset) {
    std::vector<std::int64_t> n(dataset.plan_rows + 1, 0);
    std::vector<std::int64_t> ones(dataset.plan_rows + 1, 0);
    for (const auto& obs : dataset.observations) {
        const auto r = static_cast<std::size_t>(obs.row_id);
        ++n[r];
        ones[r] += obs.score;
    }
    SampleStats stats;
    for (std::size_t r = 1; r <= dataset.plan_rows; ++r) {
        if (n[r] == 0) {
            stats.unscored_rows.push_back(static_cast<int>(r));
            continue;
        }
        RowStats row;
        row.row_id = static_cast<int>(r);
        row.n = n[r];
        row.successes = ones[r];
        row.mean = static_cast<double>(ones[r]) / static_cast<double>(n[r]);
        if (n[r] >= 2) {
            const double nn = static_cast<double>(n[r]);
            row.std_dev = std::sqrt(row.mean * (1.0 - row.mean) * nn / (nn - 1.0));
        }
        stats.rows.push_back(row);
    }
    return stats;
}

}  // namespace ctd
