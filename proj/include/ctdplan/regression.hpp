// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctdplan/factor_model.hpp"
#include "ctdplan/plan.hpp"
#include "ctdplan/scores.hpp"

namespace ctd {

/// Dummy-coded design: intercept, then one 0/1 column per non-reference level
/// of each factor (treatment coding against the first declared value), then
/// optional order-2 interaction columns (products of two main-effect dummies).
/// One row per score observation. Levels never observed in the scored rows
/// produce structurally all-zero columns; those are dropped and recorded.
struct DesignMatrix {
    std::vector<std::string> column_names;  // [0] == "Intercept"
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> dropped_columns;
    /// Wald grouping: attribute (or interaction pair) -> column indices.
    std::vector<std::pair<std::string, std::vector<int>>> groups;
    /// True when some plan row carries more than one observation (the fit
    /// treats observations as independent; the report notes this).
    bool repeated_rows = false;
};

DesignMatrix build_design_matrix(const FactorModel& model, const Plan& plan,
                                 const ScoreDataset& dataset, int interaction_order = 1);

struct RegressionFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;  // inverse observed Fisher information
    double log_likelihood = 0.0;
    int iterations = 0;
    double final_grad_norm = 0.0;
    bool converged = false;
    std::vector<std::string> column_names;
    std::vector<std::pair<std::string, std::vector<int>>> groups;
    bool repeated_rows = false;
};

/// Maximum-likelihood logistic fit via Newton-Raphson (IRLS). Converged when
/// the max score-equation component is < 1e-8 or the parameter step is
/// < 1e-10, within 25 iterations. Rank deficiency and separation raise errors
/// naming the offending columns.
RegressionFit fit_logistic(const DesignMatrix& dm);

struct CoefficientRow {
    std::string term;
    double coefficient = 0.0;
    double std_err = 0.0;
    double ci_low = 0.0;    // coefficient - 1.96 se
    double ci_high = 0.0;   // coefficient + 1.96 se
    double z = 0.0;
    double p_value = 1.0;
    double odds_ratio = 1.0;
    std::string symbol;
};

std::vector<CoefficientRow> coefficient_table(const RegressionFit& fit);

struct WaldRow {
    std::string term;
    double chi2 = 0.0;
    double p_value = 1.0;
    int df = 0;
    std::string symbol;
};

/// Per-attribute joint Wald tests: W = b' S^-1 b over each group's coefficient
/// block, chi-square with df = group size. The intercept appears as its own
/// 1-df row, followed by the fit's groups.
std::vector<WaldRow> wald_table(const RegressionFit& fit,
                                const std::vector<std::pair<std::string, std::vector<int>>>& grouping);
std::vector<WaldRow> wald_table(const RegressionFit& fit);

/// R-style significance code: "***" p<0.001, "**" p<0.01, "*" p<0.05,
/// "." p<0.1, else "".
std::string significance_symbol(double p);

std::string coefficient_table_csv(const std::vector<CoefficientRow>& rows);
std::string coefficient_table_text(const std::vector<CoefficientRow>& rows);
std::string wald_table_csv(const std::vector<WaldRow>& rows);
std::string wald_table_text(const std::vector<WaldRow>& rows);

/// Log-likelihood of a logistic model at beta (used by fit and by diagnostic
/// checks).
double logistic_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& beta);

}  // namespace ctd
