// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ctdplan/error.hpp"
#include "ctdplan/plan_generator.hpp"
#include "ctdplan/regression.hpp"
#include "ctdplan/rng.hpp"
#include "ctdplan/simulation.hpp"
#include "support.hpp"

using namespace ctd;

namespace {

// one boolean factor; cells (x=ref: s0/n0, x=alt: s1/n1)
struct TwoCell {
    Plan plan;
    ScoreDataset ds;
    FactorModel model = test_support::bool_model(1);
};

TwoCell two_cell(int s0, int n0, int s1, int n1) {
    TwoCell tc;
    tc.plan.rows = {{0}, {1}};
    std::string csv = "row_id,sample_id,score\n";
    for (int i = 0; i < n0; ++i) {
        csv += "1,a" + std::to_string(i) + "," + (i < s0 ? "1" : "0") + "\n";
    }
    for (int i = 0; i < n1; ++i) {
        csv += "2,b" + std::to_string(i) + "," + (i < s1 ? "1" : "0") + "\n";
    }
    tc.ds = ScoreDataset::ingest_csv(tc.plan, csv);
    return tc;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

TEST_CASE("design matrix shapes") {
    SUBCASE("one boolean factor gives intercept plus one dummy") {
        const auto tc = two_cell(1, 2, 1, 2);
        const auto dm = build_design_matrix(tc.model, tc.plan, tc.ds, 1);
        CHECK(dm.column_names == std::vector<std::string>{"Intercept", "f1=1"});
        CHECK(dm.X.rows() == 4);
        CHECK(dm.X.cols() == 2);
    }
    SUBCASE("the running-example model yields the 19-column order-1 design") {
        const auto model =
            FactorModel::load(std::string(CTDPLAN_DATA_DIR) + "/code_summary_model.json");
        const auto req = CoverageRequirement::make(model, 2);
        SimulationConfig cfg;
        cfg.generations = 2;
        cfg.master_seed = 5;
        const auto sim = run_hierarchical_simulation(model, req, cfg);
        const auto dm = build_design_matrix(model, sim.plan, sim.scores, 1);
        CHECK(dm.column_names.size() == 19);  // 1 + 12 + 3*2
        CHECK(dm.groups.size() == 15);
        CHECK(dm.dropped_columns.empty());
        CHECK(dm.repeated_rows);
    }
    SUBCASE("two boolean factors at order 2 add the single product column") {
        const auto model = test_support::bool_model(2);
        Plan plan;
        plan.rows = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        const auto ds = ScoreDataset::ingest_csv(
            plan, "row_id,sample_id,score\n1,a,0\n2,a,1\n3,a,1\n4,a,0\n");
        const auto dm = build_design_matrix(model, plan, ds, 2);
        CHECK(dm.column_names ==
              std::vector<std::string>{"Intercept", "f1=1", "f2=1", "f1=1:f2=1"});
        REQUIRE(dm.groups.size() == 3);
        CHECK(dm.groups[2].first == "f1:f2");
        CHECK(dm.groups[2].second == std::vector<int>{3});
    }
    SUBCASE("interaction order must be 1 or 2") {
        const auto tc = two_cell(1, 2, 1, 2);
        CHECK_THROWS_AS(build_design_matrix(tc.model, tc.plan, tc.ds, 3), ValidationError);
    }
}

TEST_CASE("symmetric cells fit to zero coefficients") {
    const auto tc = two_cell(2, 4, 2, 4);
    const auto fit = fit_logistic(build_design_matrix(tc.model, tc.plan, tc.ds, 1));
    CHECK(fit.beta(0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fit.beta(1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("the saturated 2x2 fit matches the closed form") {
    const auto tc = two_cell(1, 4, 3, 4);
    const auto fit = fit_logistic(build_design_matrix(tc.model, tc.plan, tc.ds, 1));
    // logit(1/4) and logit(3/4) - logit(1/4) = 2 ln 3
    CHECK(fit.beta(0) == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-6));
    CHECK(fit.beta(1) == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-6));
    // se = sqrt(1/1 + 1/3 + 1/3 + 1/1) = sqrt(8/3)
    const double se = std::sqrt(fit.covariance(1, 1));
    CHECK(se == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-6));

    const auto table = coefficient_table(fit);
    REQUIRE(table.size() == 2);
    CHECK(table[1].z == doctest::Approx(1.34552).epsilon(1e-5));
    CHECK(table[1].p_value == doctest::Approx(0.178457).epsilon(1e-5));
    CHECK(table[1].symbol == "");
    CHECK(table[1].ci_low == doctest::Approx(table[1].coefficient - 1.96 * se).epsilon(1e-12));
    CHECK(table[1].ci_high == doctest::Approx(table[1].coefficient + 1.96 * se).epsilon(1e-12));
    CHECK(table[1].odds_ratio == doctest::Approx(std::exp(fit.beta(1))).epsilon(1e-12));
}

TEST_CASE("separated cells are rejected with the offending column") {
    const auto tc = two_cell(0, 4, 4, 4);
    CHECK_THROWS_WITH_AS(fit_logistic(build_design_matrix(tc.model, tc.plan, tc.ds, 1)),
                         doctest::Contains("separation detected"), ValidationError);
}

TEST_CASE("saturated single-factor fits match the logit closed form") {
    Rng rng(90210);
    for (int trial = 0; trial < 25; ++trial) {
        const int n0 = 5 + static_cast<int>(rng.below(20));
        const int n1 = 5 + static_cast<int>(rng.below(20));
        const int s0 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n0 - 1)));
        const int s1 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n1 - 1)));
        const auto tc = two_cell(s0, n0, s1, n1);
        const auto fit = fit_logistic(build_design_matrix(tc.model, tc.plan, tc.ds, 1));
        const double p0 = static_cast<double>(s0) / n0;
        const double p1 = static_cast<double>(s1) / n1;
        CHECK(fit.beta(0) == doctest::Approx(logit(p0)).epsilon(1e-6));
        CHECK(fit.beta(1) == doctest::Approx(logit(p1) - logit(p0)).epsilon(1e-6));
        CHECK(fit.final_grad_norm < 1e-6);
    }
}

TEST_CASE("score equations hold at a multi-factor fit") {
    const auto model = test_support::bool_model(4);
    const auto req = CoverageRequirement::make(model, 2);
    const auto plan = multi_generation_plan(model, req, 4, 17);
    const auto sim = simulate_with_effects(
        model, plan, {{"Intercept", 0.4}, {"f1=1", 0.8}, {"f3=1", -0.5}}, 40, 99);
    const auto dm = build_design_matrix(model, sim.plan, sim.scores, 1);
    const auto fit = fit_logistic(dm);
    Eigen::VectorXd mu(dm.X.rows());
    const Eigen::VectorXd eta = dm.X * fit.beta;
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = 1.0 / (1.0 + std::exp(-eta(i)));
    const Eigen::VectorXd score = dm.X.transpose() * (dm.y - mu);
    CHECK(score.lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("the analytic gradient matches central finite differences") {
    const auto model = test_support::bool_model(3);
    const auto req = CoverageRequirement::make(model, 2);
    const auto plan = multi_generation_plan(model, req, 3, 23);
    const auto sim = simulate_with_effects(model, plan, {{"Intercept", 0.2}, {"f2=1", 0.6}}, 25, 7);
    const auto dm = build_design_matrix(model, sim.plan, sim.scores, 1);
    const auto fit = fit_logistic(dm);

    auto check_gradient_at = [&](const Eigen::VectorXd& beta) {
        Eigen::VectorXd mu(dm.X.rows());
        const Eigen::VectorXd eta = dm.X * beta;
        for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = 1.0 / (1.0 + std::exp(-eta(i)));
        const Eigen::VectorXd analytic = dm.X.transpose() * (dm.y - mu);
        const double h = 1e-5;
        for (Eigen::Index j = 0; j < beta.size(); ++j) {
            Eigen::VectorXd hi = beta, lo = beta;
            hi(j) += h;
            lo(j) -= h;
            const double fd = (logistic_log_likelihood(dm.X, dm.y, hi) -
                               logistic_log_likelihood(dm.X, dm.y, lo)) /
                              (2.0 * h);
            const double rel = std::abs(analytic(j) - fd) /
                               std::max(1.0, std::abs(analytic(j)));
            CHECK(rel < 1e-4);
        }
    };
    check_gradient_at(fit.beta);
    check_gradient_at(fit.beta + Eigen::VectorXd::Constant(fit.beta.size(), 0.3));
}

TEST_CASE("permuting observations changes no reported statistic") {
    const auto model = test_support::bool_model(3);
    const auto req = CoverageRequirement::make(model, 2);
    const auto plan = multi_generation_plan(model, req, 2, 3);
    const auto sim = simulate_with_effects(model, plan, {{"f1=1", 0.5}}, 20, 12);

    auto shuffled = sim.scores;
    Rng rng(8675309);
    for (std::size_t i = shuffled.observations.size(); i > 1; --i) {
        std::swap(shuffled.observations[i - 1],
                  shuffled.observations[static_cast<std::size_t>(rng.below(i))]);
    }
    const auto f1 = fit_logistic(build_design_matrix(model, sim.plan, sim.scores, 1));
    const auto f2 = fit_logistic(build_design_matrix(model, sim.plan, shuffled, 1));
    for (Eigen::Index j = 0; j < f1.beta.size(); ++j) {
        CHECK(f1.beta(j) == doctest::Approx(f2.beta(j)).epsilon(1e-10));
        CHECK(std::sqrt(f1.covariance(j, j)) ==
              doctest::Approx(std::sqrt(f2.covariance(j, j))).epsilon(1e-10));
    }
}

TEST_CASE("never-observed levels are dropped and the rest is unchanged") {
    const auto model = FactorModel::parse(R"({
      "factors": [
        {"name": "x", "values": ["a", "b"]},
        {"name": "t", "values": ["low", "mid", "high"]}
      ]
    })");
    Plan plan;
    plan.rows = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};  // t=high never appears
    std::string csv = "row_id,sample_id,score\n";
    const int per_row[] = {3, 7, 6, 2};
    for (int r = 0; r < 4; ++r) {
        for (int i = 0; i < 10; ++i) {
            csv += std::to_string(r + 1) + ",s" + std::to_string(i) + "," +
                   (i < per_row[r] ? "1" : "0") + "\n";
        }
    }
    const auto ds = ScoreDataset::ingest_csv(plan, csv);
    const auto dm = build_design_matrix(model, plan, ds, 1);
    CHECK(dm.dropped_columns == std::vector<std::string>{"t=high"});
    CHECK(dm.column_names == std::vector<std::string>{"Intercept", "x=b", "t=mid"});
    const auto fit = fit_logistic(dm);

    // the same data on a model that never declares the unseen level
    const auto reduced = FactorModel::parse(R"({
      "factors": [
        {"name": "x", "values": ["a", "b"]},
        {"name": "t", "values": ["low", "mid"]}
      ]
    })");
    const auto fit2 = fit_logistic(build_design_matrix(reduced, plan, ds, 1));
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
        CHECK(fit.beta(j) == doctest::Approx(fit2.beta(j)).epsilon(1e-12));
    }
}

TEST_CASE("collinear designs are rejected with column names") {
    // two factors forced equal by the plan rows
    const auto model = test_support::bool_model(2);
    Plan plan;
    plan.rows = {{0, 0}, {1, 1}};
    const auto ds = ScoreDataset::ingest_csv(
        plan, "row_id,sample_id,score\n1,a,0\n1,b,1\n2,a,1\n2,b,1\n");
    CHECK_THROWS_WITH_AS(fit_logistic(build_design_matrix(model, plan, ds, 1)),
                         doctest::Contains("rank deficient"), ValidationError);
}

TEST_CASE("a single scored plan row cannot be fit") {
    const auto model = test_support::bool_model(3);
    Plan plan;
    plan.rows = {{0, 1, 0}, {1, 0, 1}};
    const auto ds =
        ScoreDataset::ingest_csv(plan, "row_id,sample_id,score\n1,a,1\n1,b,0\n1,c,1\n");
    CHECK_THROWS_AS(fit_logistic(build_design_matrix(model, plan, ds, 1)), ValidationError);
}

TEST_CASE("wald table for single-column groups squares the z statistic") {
    const auto tc = two_cell(3, 10, 7, 10);
    const auto fit = fit_logistic(build_design_matrix(tc.model, tc.plan, tc.ds, 1));
    const auto coef = coefficient_table(fit);
    const auto wald = wald_table(fit);
    REQUIRE(wald.size() == 2);  // Intercept + f1
    CHECK(wald[0].term == "Intercept");
    CHECK(wald[0].df == 1);
    CHECK(wald[1].df == 1);
    CHECK(wald[1].chi2 == doctest::Approx(coef[1].z * coef[1].z).epsilon(1e-9));
    CHECK(wald[0].chi2 == doctest::Approx(coef[0].z * coef[0].z).epsilon(1e-9));
}

TEST_CASE("a three-level attribute gets a 2-df wald row") {
    const auto model = FactorModel::parse(R"({
      "factors": [
        {"name": "x", "values": ["a", "b"]},
        {"name": "temperature", "values": ["low", "medium", "high"]}
      ]
    })");
    const auto req = CoverageRequirement::make(model, 2);
    const auto plan = multi_generation_plan(model, req, 3, 77);
    const auto sim = simulate_with_effects(
        model, plan, {{"temperature=medium", 0.5}, {"temperature=high", -0.4}}, 40, 5);
    const auto fit = fit_logistic(build_design_matrix(model, sim.plan, sim.scores, 1));
    const auto wald = wald_table(fit);
    REQUIRE(wald.size() == 3);
    CHECK(wald[2].term == "temperature");
    CHECK(wald[2].df == 2);
    CHECK(wald[2].chi2 > 0.0);
}

TEST_CASE("a null coefficient group gives chi2 0 and p 1") {
    RegressionFit fit;
    fit.beta = Eigen::VectorXd::Zero(3);
    fit.covariance = Eigen::MatrixXd::Identity(3, 3);
    fit.column_names = {"Intercept", "g=1", "g=2"};
    fit.converged = true;
    const auto wald = wald_table(fit, {{"g", {1, 2}}});
    REQUIRE(wald.size() == 2);
    CHECK(wald[1].chi2 == 0.0);
    CHECK(wald[1].p_value == 1.0);
    CHECK(wald[1].df == 2);
    CHECK(wald[1].symbol == "");
}

TEST_CASE("a singular covariance submatrix is reported with its group") {
    RegressionFit fit;
    fit.beta = Eigen::VectorXd::Ones(3);
    fit.covariance = Eigen::MatrixXd::Zero(3, 3);
    fit.covariance(0, 0) = 1.0;  // intercept fine, group block singular
    fit.column_names = {"Intercept", "g=1", "g=2"};
    fit.converged = true;
    CHECK_THROWS_WITH_AS(wald_table(fit, {{"g", {1, 2}}}), doctest::Contains("singular"),
                         ctd::Error);
}

TEST_CASE("zero coefficient rows report p 1 and unit odds ratio") {
    RegressionFit fit;
    fit.beta = Eigen::VectorXd::Zero(2);
    fit.covariance = Eigen::MatrixXd::Identity(2, 2) * 0.25;
    fit.column_names = {"Intercept", "x=1"};
    fit.converged = true;
    const auto table = coefficient_table(fit);
    CHECK(table[1].p_value == 1.0);
    CHECK(table[1].odds_ratio == 1.0);
    CHECK(table[1].symbol == "");
}

TEST_CASE("significance symbols follow the R convention with exclusive bounds") {
    CHECK(significance_symbol(0.0005) == "***");
    CHECK(significance_symbol(0.009) == "**");
    CHECK(significance_symbol(0.03) == "*");
    CHECK(significance_symbol(0.058) == ".");
    CHECK(significance_symbol(0.1) == "");
    CHECK(significance_symbol(0.001) == "**");
    CHECK(significance_symbol(0.01) == "*");
    CHECK(significance_symbol(0.05) == ".");
    CHECK(significance_symbol(0.9) == "");
}

TEST_CASE("table renderers emit the pinned columns") {
    const auto tc = two_cell(3, 10, 7, 10);
    const auto fit = fit_logistic(build_design_matrix(tc.model, tc.plan, tc.ds, 1));
    const auto coef_csv = coefficient_table_csv(coefficient_table(fit));
    CHECK(coef_csv.rfind("term,coefficient,ci_low,ci_high,p_value,odds_ratio,symbol\n", 0) == 0);
    const auto wald_csv = wald_table_csv(wald_table(fit));
    CHECK(wald_csv.rfind("term,chi2,p_value,df,symbol\n", 0) == 0);
    CHECK(coefficient_table_text(coefficient_table(fit)).find("Intercept") != std::string::npos);
    CHECK(wald_table_text(wald_table(fit)).find("Intercept") != std::string::npos);
}
