// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/coverage.hpp"

#include <algorithm>

#include "ctdplan/error.hpp"

namespace ctd {

CoverageRequirement CoverageRequirement::make(
    const FactorModel& model, int strength, const std::vector<std::string>& scope_names,
    const std::vector<std::pair<std::string, std::string>>& fixed_labels) {
    CoverageRequirement req;
    req.strength = strength;

    for (const auto& [fname, vlabel] : fixed_labels) {
        const int fi = model.factor_index(fname);
        if (fi < 0) throw ValidationError("unknown factor in --fix: " + fname);
        const int vi = model.value_index(fi, vlabel);
        if (vi < 0) {
            throw ValidationError("unknown value \"" + vlabel + "\" for fixed factor " + fname);
        }
        req.fixed.emplace_back(fi, vi);
    }
    std::sort(req.fixed.begin(), req.fixed.end());
    for (std::size_t i = 1; i < req.fixed.size(); ++i) {
        if (req.fixed[i].first == req.fixed[i - 1].first) {
            throw ValidationError("factor fixed twice: " +
                                  model.factors()[static_cast<std::size_t>(req.fixed[i].first)].name);
        }
    }

    auto is_fixed = [&](int fi) {
        return std::any_of(req.fixed.begin(), req.fixed.end(),
                           [fi](const auto& fv) { return fv.first == fi; });
    };

    if (scope_names.empty()) {
        for (std::size_t i = 0; i < model.factor_count(); ++i) {
            if (!is_fixed(static_cast<int>(i))) req.scope.push_back(static_cast<int>(i));
        }
    } else {
        for (const auto& name : scope_names) {
            const int fi = model.factor_index(name);
            if (fi < 0) throw ValidationError("unknown factor in scope: " + name);
            if (is_fixed(fi)) {
                throw ValidationError("factor " + name + " cannot be both fixed and in scope");
            }
            req.scope.push_back(fi);
        }
        std::sort(req.scope.begin(), req.scope.end());
        req.scope.erase(std::unique(req.scope.begin(), req.scope.end()), req.scope.end());
    }

    if (req.scope.empty()) throw ValidationError("coverage scope is empty");
    if (strength < 1) throw ValidationError("strength must be >= 1");
    if (static_cast<std::size_t>(strength) > req.scope.size()) {
        throw ValidationError("strength " + std::to_string(strength) +
                              " exceeds the number of scoped factors (" +
                              std::to_string(req.scope.size()) + ")");
    }
    return req;
}

std::vector<std::string> CoverageRequirement::scope_labels(const FactorModel& model) const {
    std::vector<std::string> out;
    for (int fi : scope) out.push_back(model.factors()[static_cast<std::size_t>(fi)].name);
    return out;
}

std::vector<std::pair<std::string, std::string>> CoverageRequirement::fixed_as_labels(
    const FactorModel& model) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [fi, vi] : fixed) {
        const auto& f = model.factors()[static_cast<std::size_t>(fi)];
        out.emplace_back(f.name, f.values[static_cast<std::size_t>(vi)]);
    }
    return out;
}

std::string interaction_to_string(const FactorModel& model, const Interaction& t) {
    std::string out;
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        if (i) out += ", ";
        const auto& f = model.factors()[static_cast<std::size_t>(t.entries[i].first)];
        out += f.name + "=" + f.values[static_cast<std::size_t>(t.entries[i].second)];
    }
    return out;
}

namespace {

// Depth-first completion search: does some complete valid combination extend
// `partial`? Factors are assigned in declared order, values in declared order;
// branches whose partial assignment already violates a constraint are pruned.
bool extendable(const FactorModel& model, Combination& partial, std::size_t next) {
    const std::size_t n = model.factor_count();
    while (next < n && partial[next] != kUnassigned) ++next;
    if (next == n) return !model.partial_forbidden(partial);
    const auto m = model.factors()[next].values.size();
    for (std::size_t v = 0; v < m; ++v) {
        partial[next] = static_cast<int>(v);
        if (!model.partial_forbidden(partial) && extendable(model, partial, next + 1)) {
            partial[next] = kUnassigned;
            return true;
        }
    }
    partial[next] = kUnassigned;
    return false;
}

Combination base_assignment(const FactorModel& model, const CoverageRequirement& req) {
    Combination partial(model.factor_count(), kUnassigned);
    for (const auto& [fi, vi] : req.fixed) partial[static_cast<std::size_t>(fi)] = vi;
    return partial;
}

template <typename Visit>
void enumerate_interactions(const FactorModel& model, const CoverageRequirement& req,
                            Visit&& visit) {
    const auto k = static_cast<std::size_t>(req.strength);
    const std::size_t s = req.scope.size();
    // k-subsets of scope indices, lexicographic
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        // odometer over the value tuples, first factor slowest
        std::vector<int> vals(k, 0);
        while (true) {
            Interaction t;
            t.entries.reserve(k);
            for (std::size_t i = 0; i < k; ++i) t.entries.emplace_back(req.scope[pick[i]], vals[i]);
            visit(std::move(t));
            std::size_t i = k;
            bool done = true;
            while (i > 0) {
                --i;
                const auto m = model.factors()[static_cast<std::size_t>(req.scope[pick[i]])]
                                   .values.size();
                if (static_cast<std::size_t>(++vals[i]) < m) {
                    done = false;
                    break;
                }
                vals[i] = 0;
            }
            if (done) break;
        }
        // next k-subset
        std::size_t i = k;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (pick[i] < s - (k - i)) {
                ++pick[i];
                for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
}

}  // namespace

bool interaction_feasible(const FactorModel& model, const CoverageRequirement& req,
                          const Interaction& t) {
    Combination partial = base_assignment(model, req);
    for (const auto& [fi, vi] : t.entries) {
        const auto f = static_cast<std::size_t>(fi);
        if (partial[f] != kUnassigned && partial[f] != vi) return false;
        partial[f] = vi;
    }
    if (model.partial_forbidden(partial)) return false;
    return extendable(model, partial, 0);
}

std::vector<Interaction> required_interactions(const FactorModel& model,
                                               const CoverageRequirement& req) {
    std::vector<Interaction> out;
    enumerate_interactions(model, req, [&](Interaction t) {
        if (interaction_feasible(model, req, t)) out.push_back(std::move(t));
    });
    return out;
}

std::vector<Interaction> excluded_interactions(const FactorModel& model,
                                               const CoverageRequirement& req) {
    std::vector<Interaction> out;
    enumerate_interactions(model, req, [&](Interaction t) {
        if (!interaction_feasible(model, req, t)) out.push_back(std::move(t));
    });
    return out;
}

CoverageReport coverage_report(const FactorModel& model, const CoverageRequirement& req,
                               const Plan& plan) {
    for (std::size_t r = 0; r < plan.rows.size(); ++r) {
        const auto& row = plan.rows[r];
        if (!model.is_valid(row)) {
            throw ValidationError("plan row " + std::to_string(r + 1) +
                                  " violates a model constraint");
        }
        for (const auto& [fi, vi] : req.fixed) {
            if (row[static_cast<std::size_t>(fi)] != vi) {
                throw ValidationError(
                    "plan row " + std::to_string(r + 1) + " does not honor fixed value " +
                    model.factors()[static_cast<std::size_t>(fi)].name + "=" +
                    model.factors()[static_cast<std::size_t>(fi)]
                        .values[static_cast<std::size_t>(vi)]);
            }
        }
    }

    const auto required = required_interactions(model, req);
    CoverageReport report;
    report.required = required.size();
    for (const auto& t : required) {
        bool covered = false;
        for (const auto& row : plan.rows) {
            bool agrees = true;
            for (const auto& [fi, vi] : t.entries) {
                if (row[static_cast<std::size_t>(fi)] != vi) {
                    agrees = false;
                    break;
                }
            }
            if (agrees) {
                covered = true;
                break;
            }
        }
        if (covered) {
            ++report.covered;
        } else {
            report.missing.push_back(t);
        }
    }
    report.coverage_ratio =
        report.required == 0 ? 1.0
                             : static_cast<double>(report.covered) /
                                   static_cast<double>(report.required);
    return report;
}

}  // namespace ctd
