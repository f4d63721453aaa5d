// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

// Shared test helpers and independent oracles. Everything here is written
// from first principles so the checks stay independent of the library's own
// bookkeeping.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ctdplan/factor_model.hpp"
#include "ctdplan/plan.hpp"

namespace test_support {

/// n boolean factors named f1..fn with values ["0", "1"].
inline ctd::FactorModel bool_model(int n) {
    std::vector<ctd::Factor> factors;
    for (int i = 1; i <= n; ++i) {
        factors.push_back({"f" + std::to_string(i), {"0", "1"}});
    }
    return ctd::FactorModel(std::move(factors), {});
}

/// Textbook step-down Sidak, evaluated literally: sort ascending, apply
/// 1-(1-p)^(m-i+1) at rank i (1-based), enforce monotonicity by running
/// maximum, cap at 1, return in input order. Coded independently of the
/// library (O(m^2) rank lookup instead of an index sort).
inline std::vector<double> holm_sidak_oracle(const std::vector<double>& p) {
    const std::size_t m = p.size();
    std::vector<double> sorted(p);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> adjusted_sorted(m);
    for (std::size_t i = 0; i < m; ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            const double f =
                std::min(1.0, 1.0 - std::pow(1.0 - sorted[j], static_cast<double>(m - j)));
            best = std::max(best, f);
        }
        adjusted_sorted[i] = best;
    }
    // map back to input order; ties consume sorted slots left to right
    std::vector<bool> used(m, false);
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!used[i] && sorted[i] == p[k]) {
                out[k] = adjusted_sorted[i];
                used[i] = true;
                break;
            }
        }
    }
    return out;
}

/// Pooled two-proportion z statistic and two-sided p, straight from the
/// formula (independent of the library's implementation).
inline std::pair<double, double> ztest_oracle(double s1, double n1, double s2, double n2) {
    const double pooled = (s1 + s2) / (n1 + n2);
    if (pooled <= 0.0 || pooled >= 1.0) return {0.0, 1.0};
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
    const double z = (s1 / n1 - s2 / n2) / se;
    return {z, std::erfc(std::abs(z) / std::sqrt(2.0))};
}

/// Brute-force k-coverage check by double loop: enumerate every k-subset of
/// factors and every value tuple, decide feasibility by scanning the full
/// combination space, and look for an agreeing row. Only usable for models
/// with |A| small enough to enumerate.
struct BruteCoverage {
    std::size_t required = 0;
    std::size_t covered = 0;
};

inline BruteCoverage brute_force_coverage(const ctd::FactorModel& model,
                                          const std::vector<ctd::Combination>& rows, int k) {
    const auto n = model.factor_count();

    // all complete valid combinations
    std::vector<ctd::Combination> space;
    ctd::Combination c(n, 0);
    while (true) {
        if (model.is_valid(c)) space.push_back(c);
        std::size_t i = n;
        bool done = true;
        while (i > 0) {
            --i;
            if (static_cast<std::size_t>(++c[i]) < model.factors()[i].values.size()) {
                done = false;
                break;
            }
            c[i] = 0;
        }
        if (done) break;
    }

    BruteCoverage result;
    std::vector<std::size_t> pick(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
    auto next_subset = [&]() {
        std::size_t i = pick.size();
        while (i > 0) {
            --i;
            if (pick[i] < n - (pick.size() - i)) {
                ++pick[i];
                for (std::size_t j = i + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    do {
        std::vector<int> vals(pick.size(), 0);
        while (true) {
            // feasibility: some valid full combination agrees on all k entries
            bool feasible = false;
            for (const auto& full : space) {
                bool agrees = true;
                for (std::size_t i = 0; i < pick.size(); ++i) {
                    if (full[pick[i]] != vals[i]) {
                        agrees = false;
                        break;
                    }
                }
                if (agrees) {
                    feasible = true;
                    break;
                }
            }
            if (feasible) {
                ++result.required;
                bool covered = false;
                for (const auto& row : rows) {
                    bool agrees = true;
                    for (std::size_t i = 0; i < pick.size(); ++i) {
                        if (row[pick[i]] != vals[i]) {
                            agrees = false;
                            break;
                        }
                    }
                    if (agrees) {
                        covered = true;
                        break;
                    }
                }
                if (covered) ++result.covered;
            }
            std::size_t i = pick.size();
            bool done = true;
            while (i > 0) {
                --i;
                if (static_cast<std::size_t>(++vals[i]) <
                    model.factors()[pick[i]].values.size()) {
                    done = false;
                    break;
                }
                vals[i] = 0;
            }
            if (done) break;
        }
    } while (next_subset());
    return result;
}

/// Exhaustive covering-array existence oracle: does any size-`target` subset
/// of the valid combination space reach full strength-k coverage?
inline bool covering_array_exists(const ctd::FactorModel& model, int k, std::size_t target) {
    std::vector<ctd::Combination> space;
    ctd::Combination c(model.factor_count(), 0);
    while (true) {
        if (model.is_valid(c)) space.push_back(c);
        std::size_t i = model.factor_count();
        bool done = true;
        while (i > 0) {
            --i;
            if (static_cast<std::size_t>(++c[i]) < model.factors()[i].values.size()) {
                done = false;
                break;
            }
            c[i] = 0;
        }
        if (done) break;
    }
    if (space.size() < target) return false;
    std::vector<std::size_t> pick(target);
    for (std::size_t i = 0; i < target; ++i) pick[i] = i;
    while (true) {
        std::vector<ctd::Combination> rows;
        rows.reserve(target);
        for (auto idx : pick) rows.push_back(space[idx]);
        const auto cov = brute_force_coverage(model, rows, k);
        if (cov.covered == cov.required) return true;
        std::size_t i = target;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (pick[i] < space.size() - (target - i)) {
                ++pick[i];
                for (std::size_t j = i + 1; j < target; ++j) pick[j] = pick[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) return false;
    }
}

/// Scores CSV with `counts[r]` ones and `n - counts[r]` zeros for row r+1.
inline std::string scores_csv(const std::vector<int>& counts, int n) {
    std::string out = "row_id,sample_id,score\n";
    for (std::size_t r = 0; r < counts.size(); ++r) {
        for (int s = 0; s < n; ++s) {
            out += std::to_string(r + 1) + ",s" + std::to_string(s + 1) + "," +
                   (s < counts[r] ? "1" : "0") + "\n";
        }
    }
    return out;
}

}  // namespace test_support
