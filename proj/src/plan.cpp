// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/plan.hpp"

#include "ctdplan/csv.hpp"
#include "ctdplan/error.hpp"

namespace ctd {

std::string Plan::to_csv(const FactorModel& model) const {
    std::vector<std::string> header{"row_id"};
    for (const auto& f : model.factors()) header.push_back(f.name);
    std::string out = csv::join(header);
    out += '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::string> fields{std::to_string(r + 1)};
        for (const auto& label : model.labels_of(rows[r])) fields.push_back(label);
        out += csv::join(fields);
        out += '\n';
    }
    return out;
}

Plan Plan::from_csv(const FactorModel& model, std::string_view text) {
    const auto records = csv::parse(text);
    if (records.empty()) throw ValidationError("plan file is empty");
    const auto& header = records[0];
    if (header.empty() || header[0] != "row_id") {
        throw ValidationError("plan file header must start with row_id");
    }
    if (header.size() != model.factor_count() + 1) {
        throw ValidationError("plan file header does not match the model's factors");
    }
    for (std::size_t i = 0; i < model.factor_count(); ++i) {
        if (header[i + 1] != model.factors()[i].name) {
            throw ValidationError("plan file column \"" + header[i + 1] +
                                  "\" does not match model factor \"" + model.factors()[i].name +
                                  "\"");
        }
    }
    Plan plan;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw ValidationError("plan row " + std::to_string(r) + " has " +
                                  std::to_string(rec.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        }
        if (rec[0] != std::to_string(r)) {
            throw ValidationError("plan row ids must be 1-based and consecutive; got \"" + rec[0] +
                                  "\" at position " + std::to_string(r));
        }
        plan.rows.push_back(
            model.combination_from_labels({rec.begin() + 1, rec.end()}));
    }
    return plan;
}

std::size_t plan_row_count(std::string_view text) {
    const auto records = csv::parse(text);
    if (records.empty()) throw ValidationError("plan file is empty");
    if (records[0].empty() || records[0][0] != "row_id") {
        throw ValidationError("plan file header must start with row_id");
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].empty() || records[r][0] != std::to_string(r)) {
            throw ValidationError("plan row ids must be 1-based and consecutive");
        }
    }
    return records.size() - 1;
}

}  // namespace ctd
