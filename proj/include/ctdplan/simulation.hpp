// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctdplan/coverage.hpp"
#include "ctdplan/plan.hpp"
#include "ctdplan/scores.hpp"

namespace ctd {

struct SimulationConfig {
    double alpha_shape = 5.0;  // Gamma(shape, rate) hyperparameters for alpha_i
    double alpha_rate = 1.0;
    double beta_shape = 2.0;   // and for beta_i
    double beta_rate = 1.0;
    int samples_per_row = 30;
    int generations = 20;
    std::uint64_t master_seed = 0;
};

/// A score dataset plus the latent per-row success probability that generated
/// it (written to the `row_id,theta_true` sidecar).
struct SimulatedDataset {
    Plan plan;
    ScoreDataset scores;
    std::vector<double> theta;  // one per plan row

    std::string theta_csv() const;
};

/// The deduplicated concatenation of `generations` independently seeded plan
/// generations (seeds derived from the master seed by splitmix64 steps).
Plan multi_generation_plan(const FactorModel& model, const CoverageRequirement& req,
                           int generations, std::uint64_t master_seed);

/// Hierarchical validation dataset: `generations` independently seeded plans
/// are generated and concatenated, identical combinations are deduplicated,
/// and each unique row i gets alpha_i ~ Gamma, beta_i ~ Gamma,
/// theta_i ~ Beta(alpha_i, beta_i) and `samples_per_row` Bernoulli(theta_i)
/// scores. Per-row random substreams are keyed by row content, so a row's
/// draws do not depend on which other rows exist.
SimulatedDataset run_hierarchical_simulation(const FactorModel& model, const CoverageRequirement& req,
                                      const SimulationConfig& cfg);

/// Effect-injection variant: theta_i = logistic(x_i' beta_true) with x_i the
/// order-1 design row of plan row i. Coefficients are keyed by design column
/// names ("Intercept", "factor=value"); unknown names raise an error.
SimulatedDataset simulate_with_effects(const FactorModel& model, const Plan& plan,
                                       const std::map<std::string, double>& true_coefficients,
                                       int samples_per_row, std::uint64_t seed);

}  // namespace ctd
