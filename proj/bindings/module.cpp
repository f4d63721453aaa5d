// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctdplan/coverage.hpp"
#include "ctdplan/error.hpp"
#include "ctdplan/factor_model.hpp"
#include "ctdplan/pairwise_stats.hpp"
#include "ctdplan/plan.hpp"
#include "ctdplan/plan_generator.hpp"
#include "ctdplan/regression.hpp"
#include "ctdplan/scores.hpp"
#include "ctdplan/simulation.hpp"
#include "ctdplan/version.hpp"

namespace py = pybind11;
using namespace ctd;

namespace {

CoverageRequirement make_requirement(const FactorModel& model, int strength,
                                     const std::vector<std::string>& scope,
                                     const std::map<std::string, std::string>& fixed) {
    std::vector<std::pair<std::string, std::string>> fixed_pairs(fixed.begin(), fixed.end());
    return CoverageRequirement::make(model, strength, scope, fixed_pairs);
}

py::dict coverage_report_dict(const FactorModel& model, const CoverageReport& report) {
    py::dict out;
    out["required"] = report.required;
    out["covered"] = report.covered;
    out["coverage_ratio"] = report.coverage_ratio;
    py::list missing;
    for (const auto& t : report.missing) missing.append(interaction_to_string(model, t));
    out["missing"] = missing;
    return out;
}

py::list plan_rows_as_dicts(const FactorModel& model, const Plan& plan) {
    py::list rows;
    for (const auto& row : plan.rows) {
        py::dict d;
        const auto labels = model.labels_of(row);
        for (std::size_t f = 0; f < labels.size(); ++f) {
            d[py::str(model.factors()[f].name)] = labels[f];
        }
        rows.append(d);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "k-coverage experiment planning and score analysis";
    m.attr("__version__") = kVersion;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<FactorModel>(m, "FactorModel")
        .def_static("parse", [](const std::string& text) { return FactorModel::parse(text); },
                    py::arg("text"))
        .def_static("load", &FactorModel::load, py::arg("path"))
        .def_property_readonly("factor_names",
                               [](const FactorModel& self) {
                                   std::vector<std::string> names;
                                   for (const auto& f : self.factors()) names.push_back(f.name);
                                   return names;
                               })
        .def("values_of",
             [](const FactorModel& self, const std::string& factor) {
                 const int fi = self.factor_index(factor);
                 if (fi < 0) throw ValidationError("unknown factor: " + factor);
                 return self.factors()[static_cast<std::size_t>(fi)].values;
             },
             py::arg("factor"))
        .def("is_valid",
             [](const FactorModel& self, const std::map<std::string, std::string>& assignment) {
                 std::vector<std::string> labels;
                 for (const auto& f : self.factors()) {
                     const auto it = assignment.find(f.name);
                     if (it == assignment.end()) {
                         throw ValidationError("assignment is missing factor " + f.name);
                     }
                     labels.push_back(it->second);
                 }
                 return self.is_valid(self.combination_from_labels(labels));
             },
             py::arg("assignment"))
        .def("space_size",
             [](const FactorModel& self) {
                 const auto s = self.space_size();
                 py::dict out;
                 out["full"] = s.full;
                 out["valid"] = s.valid ? py::cast(*s.valid) : py::none();
                 return out;
             })
        .def("serialize", &FactorModel::serialize);

    py::class_<Plan>(m, "Plan")
        .def_property_readonly("row_count", &Plan::size)
        .def_property_readonly("seed", [](const Plan& self) { return self.seed; })
        .def("to_csv", &Plan::to_csv, py::arg("model"))
        .def_static("from_csv",
                    [](const FactorModel& model, const std::string& text) {
                        return Plan::from_csv(model, text);
                    },
                    py::arg("model"), py::arg("text"))
        .def("rows",
             [](const Plan& self, const FactorModel& model) {
                 return plan_rows_as_dicts(model, self);
             },
             py::arg("model"));

    m.def(
        "generate_plan",
        [](const FactorModel& model, int strength, const std::vector<std::string>& scope,
           const std::map<std::string, std::string>& fixed, std::uint64_t seed) {
            return generate_plan(model, make_requirement(model, strength, scope, fixed), seed);
        },
        py::arg("model"), py::arg("strength") = 2, py::arg("scope") = std::vector<std::string>{},
        py::arg("fixed") = std::map<std::string, std::string>{}, py::arg("seed") = 0);

    m.def(
        "coverage_report",
        [](const FactorModel& model, const Plan& plan, int strength,
           const std::vector<std::string>& scope, const std::map<std::string, std::string>& fixed) {
            const auto req = make_requirement(model, strength, scope, fixed);
            return coverage_report_dict(model, coverage_report(model, req, plan));
        },
        py::arg("model"), py::arg("plan"), py::arg("strength") = 2,
        py::arg("scope") = std::vector<std::string>{},
        py::arg("fixed") = std::map<std::string, std::string>{});

    py::class_<ScoreDataset>(m, "ScoreDataset")
        .def_property_readonly("observation_count",
                               [](const ScoreDataset& self) { return self.observations.size(); })
        .def("to_csv", &ScoreDataset::to_csv)
        .def_static("ingest",
                    [](const Plan& plan, const std::string& text) {
                        return ScoreDataset::ingest_csv(plan, text);
                    },
                    py::arg("plan"), py::arg("text"));

    m.def("sample_stats", [](const ScoreDataset& dataset) {
        const auto stats = sample_stats(dataset);
        py::list rows;
        for (const auto& r : stats.rows) {
            py::dict d;
            d["row_id"] = r.row_id;
            d["n"] = r.n;
            d["mean"] = r.mean;
            d["std"] = r.std_dev ? py::cast(*r.std_dev) : py::none();
            rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["unscored_rows"] = stats.unscored_rows;
        return out;
    });

    m.def(
        "proportion_ztest",
        [](std::int64_t s1, std::int64_t n1, std::int64_t s2, std::int64_t n2) {
            const auto t = proportion_ztest(s1, n1, s2, n2);
            return py::make_tuple(t.z, t.p_raw);
        },
        py::arg("successes1"), py::arg("n1"), py::arg("successes2"), py::arg("n2"));

    m.def("holm_sidak_adjust", &holm_sidak_adjust, py::arg("p_values"));

    m.def(
        "pairwise_report",
        [](const ScoreDataset& dataset, double alpha) {
            const auto report = pairwise_report(sample_stats(dataset), alpha);
            py::list pairs;
            for (const auto& pr : report.pairs) {
                py::dict d;
                d["row_i"] = pr.row_i;
                d["row_j"] = pr.row_j;
                d["mean_i"] = pr.mean_i;
                d["mean_j"] = pr.mean_j;
                d["z"] = pr.z;
                d["p_raw"] = pr.p_raw;
                d["p_adjusted"] = pr.p_adjusted;
                d["significant"] = pr.significant;
                pairs.append(d);
            }
            py::dict out;
            out["pairs"] = pairs;
            out["best_row"] = report.best_row;
            out["runner_up_row"] = report.runner_up_row;
            out["best_vs_runner_up_significant"] = report.best_vs_runner_up_significant;
            out["best_vs_runner_up_p_adjusted"] = report.best_vs_runner_up_p_adjusted;
            return out;
        },
        py::arg("dataset"), py::arg("alpha") = 0.05);

    m.def(
        "analyze_regression",
        [](const FactorModel& model, const Plan& plan, const ScoreDataset& dataset,
           int interaction_order) {
            const auto dm = build_design_matrix(model, plan, dataset, interaction_order);
            const auto fit = fit_logistic(dm);
            py::list coef;
            for (const auto& r : coefficient_table(fit)) {
                py::dict d;
                d["term"] = r.term;
                d["coefficient"] = r.coefficient;
                d["ci_low"] = r.ci_low;
                d["ci_high"] = r.ci_high;
                d["p_value"] = r.p_value;
                d["odds_ratio"] = r.odds_ratio;
                d["symbol"] = r.symbol;
                coef.append(d);
            }
            py::list wald;
            for (const auto& r : wald_table(fit)) {
                py::dict d;
                d["term"] = r.term;
                d["chi2"] = r.chi2;
                d["p_value"] = r.p_value;
                d["df"] = r.df;
                d["symbol"] = r.symbol;
                wald.append(d);
            }
            py::dict out;
            out["coefficients"] = coef;
            out["wald"] = wald;
            out["log_likelihood"] = fit.log_likelihood;
            out["iterations"] = fit.iterations;
            out["dropped_columns"] = dm.dropped_columns;
            return out;
        },
        py::arg("model"), py::arg("plan"), py::arg("dataset"), py::arg("interaction_order") = 1);

    m.def("significance_symbol", &significance_symbol, py::arg("p"));

    m.def(
        "run_hierarchical_simulation",
        [](const FactorModel& model, int strength, const std::vector<std::string>& scope,
           const std::map<std::string, std::string>& fixed, int generations, int samples_per_row,
           std::uint64_t seed) {
            SimulationConfig cfg;
            cfg.generations = generations;
            cfg.samples_per_row = samples_per_row;
            cfg.master_seed = seed;
            auto sim =
                run_hierarchical_simulation(model, make_requirement(model, strength, scope, fixed), cfg);
            py::dict out;
            out["plan"] = py::cast(sim.plan);
            out["scores"] = py::cast(sim.scores);
            out["theta"] = sim.theta;
            return out;
        },
        py::arg("model"), py::arg("strength") = 2, py::arg("scope") = std::vector<std::string>{},
        py::arg("fixed") = std::map<std::string, std::string>{}, py::arg("generations") = 20,
        py::arg("samples_per_row") = 30, py::arg("seed") = 0);

    m.def(
        "simulate_with_effects",
        [](const FactorModel& model, const Plan& plan,
           const std::map<std::string, double>& true_coefficients, int samples_per_row,
           std::uint64_t seed) {
            auto sim = simulate_with_effects(model, plan, true_coefficients, samples_per_row, seed);
            py::dict out;
            out["plan"] = py::cast(sim.plan);
            out["scores"] = py::cast(sim.scores);
            out["theta"] = sim.theta;
            return out;
        },
        py::arg("model"), py::arg("plan"), py::arg("true_coefficients"),
        py::arg("samples_per_row") = 30, py::arg("seed") = 0);
}
