// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

// ctdplan: declare a factor model, generate a k-coverage experiment plan,
// ingest binary scores, and identify the best combination and the most
// influential attributes.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ctdplan/coverage.hpp"
#include "ctdplan/error.hpp"
#include "ctdplan/factor_model.hpp"
#include "ctdplan/manifest.hpp"
#include "ctdplan/pairwise_stats.hpp"
#include "ctdplan/plan.hpp"
#include "ctdplan/plan_generator.hpp"
#include "ctdplan/regression.hpp"
#include "ctdplan/scores.hpp"
#include "ctdplan/simulation.hpp"
#include "ctdplan/version.hpp"

namespace {

using nlohmann::json;

std::vector<std::pair<std::string, std::string>> parse_fixes(
    const std::vector<std::string>& fixes) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& fx : fixes) {
        const auto eq = fx.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == fx.size()) {
            throw ctd::ValidationError("--fix expects name=value, got \"" + fx + "\"");
        }
        out.emplace_back(fx.substr(0, eq), fx.substr(eq + 1));
    }
    return out;
}

std::string out_stem(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

json fixes_json(const std::vector<std::string>& fixes) {
    json j = json::array();
    for (const auto& fx : fixes) j.push_back(fx);
    return j;
}

struct PlanGenerateArgs {
    std::string model_path;
    int strength = 2;
    std::vector<std::string> scope;
    std::vector<std::string> fixes;
    std::uint64_t seed = 0;
    std::string out = "plan.csv";
};

int run_plan_generate(const PlanGenerateArgs& a) {
    const auto model = ctd::FactorModel::load(a.model_path);
    const auto req = ctd::CoverageRequirement::make(model, a.strength, a.scope, parse_fixes(a.fixes));
    const auto excluded = ctd::excluded_interactions(model, req);
    const auto plan = ctd::generate_plan(model, req, a.seed);
    const auto report = ctd::coverage_report(model, req, plan);

    ctd::write_text_file(a.out, plan.to_csv(model));
    ctd::RunManifest manifest;
    manifest.command = "plan generate";
    manifest.parameters = {{"strength", a.strength},
                           {"scope", a.scope},
                           {"fix", fixes_json(a.fixes)},
                           {"seed", a.seed}};
    manifest.inputs = {{"model", a.model_path}};
    manifest.outputs = {{"plan", a.out}};
    manifest.write_beside(a.out);

    std::printf("plan: %zu rows -> %s\n", plan.size(), a.out.c_str());
    std::printf("covered %zu/%zu interactions\n", report.covered, report.required);
    if (!excluded.empty()) {
        std::printf("note: %zu constraint-infeasible interaction(s) excluded from the requirement:\n",
                    excluded.size());
        for (const auto& t : excluded) {
            std::printf("  %s\n", ctd::interaction_to_string(model, t).c_str());
        }
    }
    if (report.covered != report.required) {
        throw ctd::Error("internal: generated plan does not reach full coverage");
    }
    return 0;
}

struct PlanVerifyArgs {
    std::string model_path;
    std::string plan_path;
    int strength = 2;
    std::vector<std::string> scope;
    std::vector<std::string> fixes;
};

int run_plan_verify(const PlanVerifyArgs& a) {
    const auto model = ctd::FactorModel::load(a.model_path);
    const auto req = ctd::CoverageRequirement::make(model, a.strength, a.scope, parse_fixes(a.fixes));
    const auto plan = ctd::Plan::from_csv(model, ctd::read_text_file(a.plan_path));
    const auto report = ctd::coverage_report(model, req, plan);
    std::printf("covered %zu/%zu interactions (ratio %.6g)\n", report.covered, report.required,
                report.coverage_ratio);
    if (report.missing.empty()) return 0;
    std::printf("missing %zu interaction(s):\n", report.missing.size());
    for (const auto& t : report.missing) {
        std::printf("  %s\n", ctd::interaction_to_string(model, t).c_str());
    }
    return 1;
}

struct AnalyzePairwiseArgs {
    std::string plan_path;
    std::string scores_path;
    double alpha = 0.05;
    std::string out = "pairwise";
};

int run_analyze_pairwise(const AnalyzePairwiseArgs& a) {
    const auto rows = ctd::plan_row_count(ctd::read_text_file(a.plan_path));
    const auto dataset = ctd::ScoreDataset::ingest_csv(rows, ctd::read_text_file(a.scores_path));
    const auto stats = ctd::sample_stats(dataset);
    for (int row : stats.unscored_rows) {
        std::fprintf(stderr, "warning: plan row %d has no observations\n", row);
    }
    const auto report = ctd::pairwise_report(stats, a.alpha);

    const std::string csv_path = a.out + ".csv";
    const std::string txt_path = a.out + ".txt";
    ctd::write_text_file(csv_path, report.to_csv());
    ctd::write_text_file(txt_path, report.to_text());
    ctd::RunManifest manifest;
    manifest.command = "analyze pairwise";
    manifest.parameters = {{"alpha", a.alpha}};
    manifest.inputs = {{"plan", a.plan_path}, {"scores", a.scores_path}};
    manifest.outputs = {{"csv", csv_path}, {"text", txt_path}};
    manifest.write_beside(a.out);

    std::printf("%zu pairwise tests -> %s, %s\n", report.pairs.size(), csv_path.c_str(),
                txt_path.c_str());
    std::printf("best: row %d (mean %.3f); difference vs row %d %s (adjusted p = %.3f)\n",
                report.best_row, report.best_mean, report.runner_up_row,
                report.best_vs_runner_up_significant ? "significant" : "not significant",
                report.best_vs_runner_up_p_adjusted);
    return 0;
}

struct AnalyzeRegressionArgs {
    std::string model_path;
    std::string plan_path;
    std::string scores_path;
    int interactions = 1;
    std::string out = "regression";
};

int run_analyze_regression(const AnalyzeRegressionArgs& a) {
    const auto model = ctd::FactorModel::load(a.model_path);
    const auto plan = ctd::Plan::from_csv(model, ctd::read_text_file(a.plan_path));
    const auto dataset = ctd::ScoreDataset::ingest_csv(plan, ctd::read_text_file(a.scores_path));
    const auto dm = ctd::build_design_matrix(model, plan, dataset, a.interactions);
    for (const auto& name : dm.dropped_columns) {
        std::fprintf(stderr, "warning: level never observed, dropping column %s\n", name.c_str());
    }
    if (dm.repeated_rows) {
        std::fprintf(stderr,
                     "note: multiple observations share a plan row; the fit treats them as "
                     "independent\n");
    }
    const auto fit = ctd::fit_logistic(dm);
    const auto coef = ctd::coefficient_table(fit);
    const auto wald = ctd::wald_table(fit);

    const std::string coef_csv = a.out + "_coefficients.csv";
    const std::string coef_txt = a.out + "_coefficients.txt";
    const std::string wald_csv = a.out + "_wald.csv";
    const std::string wald_txt = a.out + "_wald.txt";
    ctd::write_text_file(coef_csv, ctd::coefficient_table_csv(coef));
    ctd::write_text_file(coef_txt, ctd::coefficient_table_text(coef));
    ctd::write_text_file(wald_csv, ctd::wald_table_csv(wald));
    ctd::write_text_file(wald_txt, ctd::wald_table_text(wald));
    ctd::RunManifest manifest;
    manifest.command = "analyze regression";
    manifest.parameters = {{"interactions", a.interactions}};
    manifest.inputs = {{"model", a.model_path}, {"plan", a.plan_path}, {"scores", a.scores_path}};
    manifest.outputs = {{"coefficients_csv", coef_csv},
                        {"coefficients_text", coef_txt},
                        {"wald_csv", wald_csv},
                        {"wald_text", wald_txt}};
    manifest.write_beside(a.out);

    std::printf("logistic fit: %zu observations, %zu columns, converged in %d iterations\n",
                static_cast<std::size_t>(dm.X.rows()), static_cast<std::size_t>(dm.X.cols()),
                fit.iterations);
    std::printf("coefficient table (%zu rows) -> %s\n", coef.size(), coef_csv.c_str());
    std::printf("wald table (%zu rows) -> %s\n", wald.size(), wald_csv.c_str());
    return 0;
}

struct SimulateArgs {
    std::string model_path;
    int generations = 20;
    int samples = 30;
    std::uint64_t seed = 0;
    int strength = 2;
    std::vector<std::string> scope;
    std::vector<std::string> fixes;
    std::string effects_path;
    std::string out = "scores.csv";
};

int run_simulate(const SimulateArgs& a) {
    const auto model = ctd::FactorModel::load(a.model_path);
    const auto req = ctd::CoverageRequirement::make(model, a.strength, a.scope, parse_fixes(a.fixes));

    ctd::SimulatedDataset sim;
    if (a.effects_path.empty()) {
        ctd::SimulationConfig cfg;
        cfg.samples_per_row = a.samples;
        cfg.generations = a.generations;
        cfg.master_seed = a.seed;
        sim = ctd::run_hierarchical_simulation(model, req, cfg);
    } else {
        json doc;
        try {
            doc = json::parse(ctd::read_text_file(a.effects_path));
        } catch (const json::exception& e) {
            throw ctd::ValidationError(std::string("malformed effects file: ") + e.what());
        }
        if (!doc.is_object()) {
            throw ctd::ValidationError("effects file must be a JSON object of column -> value");
        }
        std::map<std::string, double> effects;
        for (const auto& [key, value] : doc.items()) {
            if (!value.is_number()) {
                throw ctd::ValidationError("effects entry " + key + " must be a number");
            }
            effects[key] = value.get<double>();
        }
        // same deduplicated multi-generation plan as the hierarchical mode
        const auto plan = ctd::multi_generation_plan(model, req, a.generations, a.seed);
        sim = ctd::simulate_with_effects(model, plan, effects, a.samples, a.seed);
    }

    const std::string stem = out_stem(a.out);
    const std::string plan_path = stem + "_plan.csv";
    const std::string theta_path = stem + "_theta.csv";
    ctd::write_text_file(a.out, sim.scores.to_csv());
    ctd::write_text_file(plan_path, sim.plan.to_csv(model));
    ctd::write_text_file(theta_path, sim.theta_csv());
    ctd::RunManifest manifest;
    manifest.command = "simulate";
    manifest.parameters = {{"generations", a.generations}, {"samples", a.samples},
                           {"seed", a.seed},               {"strength", a.strength},
                           {"scope", a.scope},             {"fix", fixes_json(a.fixes)},
                           {"effects", a.effects_path}};
    manifest.inputs = {{"model", a.model_path}};
    if (!a.effects_path.empty()) manifest.inputs["effects"] = a.effects_path;
    manifest.outputs = {{"scores", a.out}, {"plan", plan_path}, {"theta", theta_path}};
    manifest.write_beside(a.out);

    std::printf("simulated %zu unique rows x %d samples = %zu observations -> %s\n",
                sim.plan.size(), a.samples, sim.scores.observations.size(), a.out.c_str());
    std::printf("plan -> %s, true theta -> %s\n", plan_path.c_str(), theta_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-coverage experiment planning and score analysis"};
    app.set_version_flag("--version", ctd::kVersion);
    app.require_subcommand(1);

    // plan generate | plan verify
    auto* plan_cmd = app.add_subcommand("plan", "generate or verify experiment plans");
    plan_cmd->require_subcommand(1);

    PlanGenerateArgs pg;
    auto* generate = plan_cmd->add_subcommand("generate", "build a k-coverage plan");
    generate->add_option("--model", pg.model_path, "factor model JSON")->required();
    generate->add_option("--strength", pg.strength, "interaction strength k (default 2)");
    generate->add_option("--scope", pg.scope, "factors to cover (comma separated)")->delimiter(',');
    generate->add_option("--fix", pg.fixes, "pin a factor, name=value (repeatable)");
    generate->add_option("--seed", pg.seed, "generator seed (default 0)");
    generate->add_option("--out", pg.out, "output plan CSV (default plan.csv)");

    PlanVerifyArgs pv;
    auto* verify = plan_cmd->add_subcommand("verify", "check a plan's coverage");
    verify->add_option("--model", pv.model_path, "factor model JSON")->required();
    verify->add_option("--plan", pv.plan_path, "plan CSV")->required();
    verify->add_option("--strength", pv.strength, "interaction strength k (default 2)");
    verify->add_option("--scope", pv.scope, "factors to cover (comma separated)")->delimiter(',');
    verify->add_option("--fix", pv.fixes, "pin a factor, name=value (repeatable)");

    // analyze pairwise | analyze regression
    auto* analyze = app.add_subcommand("analyze", "statistical analysis of scored plans");
    analyze->require_subcommand(1);

    AnalyzePairwiseArgs ap;
    auto* pairwise = analyze->add_subcommand("pairwise", "all-pairs proportion tests");
    pairwise->add_option("--plan", ap.plan_path, "plan CSV")->required();
    pairwise->add_option("--scores", ap.scores_path, "scores CSV")->required();
    pairwise->add_option("--alpha", ap.alpha, "significance level (default 0.05)");
    pairwise->add_option("--out", ap.out, "output prefix (default pairwise)");

    AnalyzeRegressionArgs ar;
    auto* regression = analyze->add_subcommand("regression", "logistic effect estimation");
    regression->add_option("--model", ar.model_path, "factor model JSON")->required();
    regression->add_option("--plan", ar.plan_path, "plan CSV")->required();
    regression->add_option("--scores", ar.scores_path, "scores CSV")->required();
    regression->add_option("--interactions", ar.interactions, "interaction order, 1 or 2")
        ->check(CLI::IsMember({1, 2}));
    regression->add_option("--out", ar.out, "output prefix (default regression)");

    SimulateArgs sm;
    auto* simulate = app.add_subcommand("simulate", "generate synthetic score datasets");
    simulate->add_option("--model", sm.model_path, "factor model JSON")->required();
    simulate->add_option("--generations", sm.generations, "independent plan generations (default 20)");
    simulate->add_option("--samples", sm.samples, "scores per unique row (default 30)");
    simulate->add_option("--seed", sm.seed, "master seed (default 0)");
    simulate->add_option("--strength", sm.strength, "interaction strength k (default 2)");
    simulate->add_option("--scope", sm.scope, "factors to cover (comma separated)")->delimiter(',');
    simulate->add_option("--fix", sm.fixes, "pin a factor, name=value (repeatable)");
    simulate->add_option("--effects", sm.effects_path,
                         "JSON of true coefficients; theta from logistic(x'beta) instead of the "
                         "Gamma/Beta hierarchy");
    simulate->add_option("--out", sm.out, "output scores CSV (default scores.csv)");

    try {
        app.parse(argc, argv);
        if (generate->parsed()) return run_plan_generate(pg);
        if (verify->parsed()) return run_plan_verify(pv);
        if (pairwise->parsed()) return run_analyze_pairwise(ap);
        if (regression->parsed()) return run_analyze_regression(ar);
        if (simulate->parsed()) return run_simulate(sm);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ctd::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}
