// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "ctdplan/error.hpp"
#include "ctdplan/simulation.hpp"
#include "support.hpp"

using namespace ctd;

TEST_CASE("identical configs produce bit-identical datasets") {
    const auto model = test_support::bool_model(5);
    const auto req = CoverageRequirement::make(model, 2);
    SimulationConfig cfg;
    cfg.generations = 3;
    cfg.master_seed = 4711;
    const auto a = run_hierarchical_simulation(model, req, cfg);
    const auto b = run_hierarchical_simulation(model, req, cfg);
    CHECK(a.plan.rows == b.plan.rows);
    CHECK(a.theta == b.theta);
    CHECK(a.scores.to_csv() == b.scores.to_csv());
}

TEST_CASE("observation count is unique rows times samples per row") {
    const auto model = test_support::bool_model(5);
    const auto req = CoverageRequirement::make(model, 2);
    SimulationConfig cfg;
    cfg.generations = 1;
    cfg.master_seed = 99;
    const auto sim = run_hierarchical_simulation(model, req, cfg);
    CHECK(sim.scores.observations.size() == sim.plan.size() * 30);
    CHECK(sim.theta.size() == sim.plan.size());

    cfg.samples_per_row = 1;
    const auto one = run_hierarchical_simulation(model, req, cfg);
    CHECK(one.scores.observations.size() == one.plan.size());
}

TEST_CASE("rows are unique after cross-generation deduplication") {
    const auto model = test_support::bool_model(4);
    const auto req = CoverageRequirement::make(model, 2);
    SimulationConfig cfg;
    cfg.generations = 6;
    cfg.master_seed = 8;
    const auto sim = run_hierarchical_simulation(model, req, cfg);
    std::set<Combination> unique(sim.plan.rows.begin(), sim.plan.rows.end());
    CHECK(unique.size() == sim.plan.size());
    // more generations accumulate at least as many rows as one generation
    cfg.generations = 1;
    const auto single = run_hierarchical_simulation(model, req, cfg);
    CHECK(sim.plan.size() >= single.plan.size());
}

TEST_CASE("per-row draws are keyed by row content, not position") {
    const auto model = test_support::bool_model(5);
    const auto req = CoverageRequirement::make(model, 2);
    SimulationConfig cfg;
    cfg.master_seed = 1234;
    cfg.generations = 1;
    const auto small = run_hierarchical_simulation(model, req, cfg);
    cfg.generations = 4;
    const auto grown = run_hierarchical_simulation(model, req, cfg);

    std::map<Combination, double> small_theta;
    for (std::size_t r = 0; r < small.plan.size(); ++r) {
        small_theta[small.plan.rows[r]] = small.theta[r];
    }
    // every shared row keeps its theta when the plan grows
    std::size_t shared = 0;
    for (std::size_t r = 0; r < grown.plan.size(); ++r) {
        const auto it = small_theta.find(grown.plan.rows[r]);
        if (it != small_theta.end()) {
            ++shared;
            CHECK(grown.theta[r] == it->second);
        }
    }
    CHECK(shared == small.plan.size());  // generation 1 is a prefix of the dedup
}

TEST_CASE("theta values live in the unit interval and track the sample means") {
    const auto model = test_support::bool_model(6);
    const auto req = CoverageRequirement::make(model, 2);
    SimulationConfig cfg;
    cfg.generations = 8;
    cfg.master_seed = 2;
    const auto sim = run_hierarchical_simulation(model, req, cfg);
    REQUIRE(sim.plan.size() >= 20);
    const auto stats = sample_stats(sim.scores);
    double mean_theta = 0.0;
    for (std::size_t r = 0; r < sim.plan.size(); ++r) {
        REQUIRE(sim.theta[r] >= 0.0);
        REQUIRE(sim.theta[r] <= 1.0);
        mean_theta += sim.theta[r];
        CHECK(std::abs(stats.rows[r].mean - sim.theta[r]) < 0.5);  // loose per-row sanity
    }
    mean_theta /= static_cast<double>(sim.plan.size());
    CHECK(mean_theta > 0.4);  // Beta(5,2)-law rows concentrate near 5/7
    CHECK(mean_theta < 0.95);
}

TEST_CASE("config validation") {
    const auto model = test_support::bool_model(3);
    const auto req = CoverageRequirement::make(model, 2);
    SimulationConfig cfg;
    cfg.alpha_shape = 0.0;
    CHECK_THROWS_AS(run_hierarchical_simulation(model, req, cfg), ValidationError);
    cfg.alpha_shape = 5.0;
    cfg.samples_per_row = 0;
    CHECK_THROWS_AS(run_hierarchical_simulation(model, req, cfg), ValidationError);
    cfg.samples_per_row = 30;
    cfg.generations = 0;
    CHECK_THROWS_AS(run_hierarchical_simulation(model, req, cfg), ValidationError);
}

TEST_CASE("zero effects put every theta at one half") {
    const auto model = test_support::bool_model(4);
    const auto req = CoverageRequirement::make(model, 2);
    const auto plan = multi_generation_plan(model, req, 1, 5);
    const auto sim = simulate_with_effects(model, plan, {}, 10, 3);
    for (double t : sim.theta) CHECK(t == 0.5);
}

TEST_CASE("a log-odds of ln 9 lifts theta to 0.9") {
    const auto model = test_support::bool_model(2);
    Plan plan;
    plan.rows = {{0, 0}, {1, 0}, {1, 1}};
    const auto sim =
        simulate_with_effects(model, plan, {{"f1=1", std::log(9.0)}}, 5, 1);
    CHECK(sim.theta[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sim.theta[1] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(sim.theta[2] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("unknown effect columns are rejected") {
    const auto model = test_support::bool_model(2);
    Plan plan;
    plan.rows = {{0, 0}};
    CHECK_THROWS_WITH_AS(simulate_with_effects(model, plan, {{"zz=1", 1.0}}, 5, 1),
                         doctest::Contains("unknown design column"), ValidationError);
}

TEST_CASE("the theta sidecar lines up with the plan") {
    const auto model = test_support::bool_model(3);
    const auto req = CoverageRequirement::make(model, 2);
    SimulationConfig cfg;
    cfg.generations = 1;
    cfg.master_seed = 6;
    const auto sim = run_hierarchical_simulation(model, req, cfg);
    const auto csv = sim.theta_csv();
    CHECK(csv.rfind("row_id,theta_true\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n' ? 1 : 0;
    CHECK(lines == sim.plan.size() + 1);
}

TEST_CASE("effect-based scores are reproducible and respect the seed") {
    const auto model = test_support::bool_model(3);
    const auto req = CoverageRequirement::make(model, 2);
    const auto plan = multi_generation_plan(model, req, 1, 1);
    const auto a = simulate_with_effects(model, plan, {{"Intercept", 0.3}}, 20, 5);
    const auto b = simulate_with_effects(model, plan, {{"Intercept", 0.3}}, 20, 5);
    const auto c = simulate_with_effects(model, plan, {{"Intercept", 0.3}}, 20, 6);
    CHECK(a.scores.to_csv() == b.scores.to_csv());
    CHECK(a.scores.to_csv() != c.scores.to_csv());
}
