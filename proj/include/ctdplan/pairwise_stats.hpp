// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctdplan/scores.hpp"

namespace ctd {

struct TestOutcome {
    double z = 0.0;
    double p_raw = 1.0;
};

/// Pooled two-sample proportion z-test, two-sided. When the pooled proportion
/// is 0 or 1 the difference is necessarily 0 and the test returns z=0, p=1.
TestOutcome proportion_ztest(std::int64_t successes1, std::int64_t n1, std::int64_t successes2,
                             std::int64_t n2);

/// Step-down Sidak (Holm-Sidak) adjustment. Results are returned in the input
/// order; adjusted values are nondecreasing in the raw values.
std::vector<double> holm_sidak_adjust(const std::vector<double>& p_values);

struct PairResult {
    int row_i = 0, row_j = 0;
    double mean_i = 0.0, mean_j = 0.0;
    std::int64_t n_i = 0, n_j = 0;
    double z = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
    bool normal_approx_questionable = false;  // some pooled cell count < 5
};

struct PairwiseReport {
    std::vector<PairResult> pairs;  // (i, j) with i < j, ascending
    double alpha = 0.05;
    int best_row = 0;
    int runner_up_row = 0;
    double best_mean = 0.0;
    double runner_up_mean = 0.0;
    double best_vs_runner_up_p_adjusted = 1.0;
    bool best_vs_runner_up_significant = false;

    /// `row_i,row_j,mean_i,mean_j,n_i,n_j,z,p_raw,p_adjusted,significant`
    /// with 6-significant-digit numbers.
    std::string to_csv() const;
    std::string to_text() const;
};

/// All-pairs tests over the scored rows with joint Holm-Sidak adjustment.
/// The best row is the argmax of the sample mean, ties broken by lower row id.
PairwiseReport pairwise_report(const SampleStats& stats, double alpha = 0.05);

/// Two-sided standard normal tail probability 2*(1 - Phi(|z|)).
double normal_two_sided_p(double z);

/// Fixed-format helper used by all reports: 6 significant digits.
std::string format_number(double x);

}  // namespace ctd
