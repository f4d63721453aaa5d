// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/pairwise_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ctdplan/error.hpp"

namespace ctd {

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

TestOutcome proportion_ztest(std::int64_t successes1, std::int64_t n1, std::int64_t successes2,
                             std::int64_t n2) {
    if (n1 < 1 || n2 < 1) throw ValidationError("proportion_ztest: sample sizes must be >= 1");
    if (successes1 < 0 || successes1 > n1 || successes2 < 0 || successes2 > n2) {
        throw ValidationError("proportion_ztest: success counts must lie in [0, n]");
    }
    const double p1 = static_cast<double>(successes1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(successes2) / static_cast<double>(n2);
    const double pooled = static_cast<double>(successes1 + successes2) /
                          static_cast<double>(n1 + n2);
    if (pooled <= 0.0 || pooled >= 1.0) {
        return {0.0, 1.0};
    }
    const double se = std::sqrt(pooled * (1.0 - pooled) *
                                (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    const double z = (p1 - p2) / se;
    return {z, normal_two_sided_p(z)};
}

std::vector<double> holm_sidak_adjust(const std::vector<double>& p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError("holm_sidak_adjust: p-values must lie in [0, 1]");
        }
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    std::vector<double> adjusted(m);
    double running_max = 0.0;
    for (std::size_t rank = 0; rank < m; ++rank) {
        const double p = p_values[order[rank]];
        const double exponent = static_cast<double>(m - rank);
        const double stepwise = std::min(1.0, 1.0 - std::pow(1.0 - p, exponent));
        running_max = std::max(running_max, stepwise);
        adjusted[order[rank]] = running_max;
    }
    return adjusted;
}

PairwiseReport pairwise_report(const SampleStats& stats, double alpha) {
    if (stats.rows.size() < 2) {
        throw ValidationError("pairwise analysis needs at least 2 scored rows");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("alpha must lie in (0, 1)");
    }

    PairwiseReport report;
    report.alpha = alpha;
    const auto& rows = stats.rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            PairResult pr;
            pr.row_i = rows[i].row_id;
            pr.row_j = rows[j].row_id;
            pr.mean_i = rows[i].mean;
            pr.mean_j = rows[j].mean;
            pr.n_i = rows[i].n;
            pr.n_j = rows[j].n;
            const TestOutcome t =
                proportion_ztest(rows[i].successes, rows[i].n, rows[j].successes, rows[j].n);
            pr.z = t.z;
            pr.p_raw = t.p_raw;
            const double pooled = static_cast<double>(rows[i].successes + rows[j].successes) /
                                  static_cast<double>(rows[i].n + rows[j].n);
            const double min_cell = std::min(
                {static_cast<double>(rows[i].n) * pooled,
                 static_cast<double>(rows[i].n) * (1.0 - pooled),
                 static_cast<double>(rows[j].n) * pooled,
                 static_cast<double>(rows[j].n) * (1.0 - pooled)});
            pr.normal_approx_questionable = min_cell < 5.0;
            report.pairs.push_back(pr);
        }
    }

    std::vector<double> raw;
    raw.reserve(report.pairs.size());
    for (const auto& pr : report.pairs) raw.push_back(pr.p_raw);
    const auto adjusted = holm_sidak_adjust(raw);
    for (std::size_t k = 0; k < report.pairs.size(); ++k) {
        report.pairs[k].p_adjusted = adjusted[k];
        report.pairs[k].significant = adjusted[k] < alpha;
    }

    // best = argmax mean, ties by lower row id (rows are in ascending id order)
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].mean > rows[best].mean) best = i;
    }
    std::size_t runner = best == 0 ? 1 : 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == best) continue;
        if (rows[i].mean > rows[runner].mean) runner = i;
    }
    report.best_row = rows[best].row_id;
    report.runner_up_row = rows[runner].row_id;
    report.best_mean = rows[best].mean;
    report.runner_up_mean = rows[runner].mean;
    for (const auto& pr : report.pairs) {
        const int a = std::min(report.best_row, report.runner_up_row);
        const int b = std::max(report.best_row, report.runner_up_row);
        if (pr.row_i == a && pr.row_j == b) {
            report.best_vs_runner_up_p_adjusted = pr.p_adjusted;
            report.best_vs_runner_up_significant = pr.significant;
        }
    }
    return report;
}

std::string PairwiseReport::to_csv() const {
    std::string out = "row_i,row_j,mean_i,mean_j,n_i,n_j,z,p_raw,p_adjusted,significant\n";
    for (const auto& pr : pairs) {
        out += std::to_string(pr.row_i) + ',' + std::to_string(pr.row_j) + ',' +
               format_number(pr.mean_i) + ',' + format_number(pr.mean_j) + ',' +
               std::to_string(pr.n_i) + ',' + std::to_string(pr.n_j) + ',' +
               format_number(pr.z) + ',' + format_number(pr.p_raw) + ',' +
               format_number(pr.p_adjusted) + ',' + (pr.significant ? "true" : "false") + '\n';
    }
    return out;
}

std::string PairwiseReport::to_text() const {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "pairwise proportion tests (alpha = %g, %zu pairs)\n", alpha,
                  pairs.size());
    out += buf;
    std::snprintf(buf, sizeof(buf), "%6s %6s %10s %10s %8s %8s %10s %10s %12s  %s\n", "row_i",
                  "row_j", "mean_i", "mean_j", "n_i", "n_j", "z", "p_raw", "p_adjusted", "flag");
    out += buf;
    for (const auto& pr : pairs) {
        std::snprintf(buf, sizeof(buf), "%6d %6d %10s %10s %8lld %8lld %10s %10s %12s  %s%s\n",
                      pr.row_i, pr.row_j, format_number(pr.mean_i).c_str(),
                      format_number(pr.mean_j).c_str(), static_cast<long long>(pr.n_i),
                      static_cast<long long>(pr.n_j), format_number(pr.z).c_str(),
                      format_number(pr.p_raw).c_str(), format_number(pr.p_adjusted).c_str(),
                      pr.significant ? "*" : "",
                      pr.normal_approx_questionable ? " (normal approximation questionable)" : "");
        out += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "best: row %d (mean %.3f); difference vs row %d %s (adjusted p = %.3f)\n",
                  best_row, best_mean, runner_up_row,
                  best_vs_runner_up_significant ? "significant" : "not significant",
                  best_vs_runner_up_p_adjusted);
    out += buf;
    return out;
}

}  // namespace ctd
