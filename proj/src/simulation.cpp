// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "ctdplan/error.hpp"
#include "ctdplan/plan_generator.hpp"
#include "ctdplan/rng.hpp"

namespace ctd {

namespace {

std::string row_signature(const FactorModel& model, const Combination& row) {
    std::string sig;
    for (const auto& label : model.labels_of(row)) {
        sig += label;
        sig += '\x1f';
    }
    return sig;
}

void draw_scores(const FactorModel& model, SimulatedDataset& out, int samples_per_row,
                 std::uint64_t master_seed) {
    out.scores.plan_rows = out.plan.size();
    for (std::size_t r = 0; r < out.plan.size(); ++r) {
        Rng row_rng = Rng::derive(master_seed, fnv1a_64(row_signature(model, out.plan.rows[r])),
                                  fnv1a_64("scores"));
        for (int s = 0; s < samples_per_row; ++s) {
            Observation obs;
            obs.row_id = static_cast<int>(r + 1);
            obs.sample_id = "s" + std::to_string(s + 1);
            obs.score = sample_bernoulli(row_rng, out.theta[r]);
            out.scores.observations.push_back(std::move(obs));
        }
    }
}

}  // namespace

std::string SimulatedDataset::theta_csv() const {
    std::string out = "row_id,theta_true\n";
    char buf[64];
    for (std::size_t r = 0; r < theta.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", r + 1, theta[r]);
        out += buf;
    }
    return out;
}

Plan multi_generation_plan(const FactorModel& model, const CoverageRequirement& req,
                           int generations, std::uint64_t master_seed) {
    if (generations < 1) throw ValidationError("generations must be >= 1");
    Plan plan;
    plan.seed = master_seed;
    plan.strength = req.strength;
    plan.scope_names = req.scope_labels(model);
    plan.fixed_labels = req.fixed_as_labels(model);

    std::uint64_t seed_state = master_seed;
    std::unordered_set<std::string> seen;
    for (int g = 0; g < generations; ++g) {
        const std::uint64_t gen_seed = splitmix64(seed_state);
        const Plan generated = generate_plan(model, req, gen_seed);
        for (const auto& row : generated.rows) {
            if (seen.insert(row_signature(model, row)).second) {
                plan.rows.push_back(row);
            }
        }
    }
    return plan;
}

SimulatedDataset run_hierarchical_simulation(const FactorModel& model, const CoverageRequirement& req,
                                      const SimulationConfig& cfg) {
    if (cfg.alpha_shape <= 0 || cfg.alpha_rate <= 0 || cfg.beta_shape <= 0 || cfg.beta_rate <= 0) {
        throw ValidationError("Gamma hyperparameters must be > 0");
    }
    if (cfg.samples_per_row < 1) throw ValidationError("samples_per_row must be >= 1");

    SimulatedDataset out;
    out.plan = multi_generation_plan(model, req, cfg.generations, cfg.master_seed);

    // per-row latent theta, keyed by row content
    out.theta.reserve(out.plan.size());
    for (const auto& row : out.plan.rows) {
        Rng rng = Rng::derive(cfg.master_seed, fnv1a_64(row_signature(model, row)),
                              fnv1a_64("theta"));
        const double alpha = sample_gamma(rng, cfg.alpha_shape, cfg.alpha_rate);
        const double beta = sample_gamma(rng, cfg.beta_shape, cfg.beta_rate);
        out.theta.push_back(sample_beta(rng, alpha, beta));
    }

    draw_scores(model, out, cfg.samples_per_row, cfg.master_seed);
    return out;
}

SimulatedDataset simulate_with_effects(const FactorModel& model, const Plan& plan,
                                       const std::map<std::string, double>& true_coefficients,
                                       int samples_per_row, std::uint64_t seed) {
    if (samples_per_row < 1) throw ValidationError("samples_per_row must be >= 1");
    if (plan.rows.empty()) throw ValidationError("plan is empty");

    // order-1 design column names
    std::set<std::string> known{"Intercept"};
    for (const auto& f : model.factors()) {
        for (std::size_t v = 1; v < f.values.size(); ++v) {
            known.insert(f.name + "=" + f.values[v]);
        }
    }
    for (const auto& [name, value] : true_coefficients) {
        (void)value;
        if (!known.contains(name)) {
            throw ValidationError("unknown design column in effects: " + name);
        }
    }
    auto coef = [&](const std::string& name) {
        const auto it = true_coefficients.find(name);
        return it == true_coefficients.end() ? 0.0 : it->second;
    };

    SimulatedDataset out;
    out.plan = plan;
    out.theta.reserve(plan.size());
    for (const auto& row : plan.rows) {
        double eta = coef("Intercept");
        for (std::size_t f = 0; f < model.factor_count(); ++f) {
            const int v = row[f];
            if (v > 0) {
                eta += coef(model.factors()[f].name + "=" +
                            model.factors()[f].values[static_cast<std::size_t>(v)]);
            }
        }
        out.theta.push_back(1.0 / (1.0 + std::exp(-eta)));
    }

    draw_scores(model, out, samples_per_row, seed);
    return out;
}

}  // namespace ctd
