"""Smoke tests for the python bindings: one pass through the planning and
analysis workflow, plus spot checks of the statistical primitives."""

import math
import os

import pytest

import ctdplan


def data_path(name: str) -> str:
    return os.path.join(os.environ["CTDPLAN_DATA_DIR"], name)


@pytest.fixture(scope="module")
def model():
    return ctdplan.FactorModel.load(data_path("code_summary_model.json"))


def test_model_surface(model):
    assert len(model.factor_names) == 15
    assert model.values_of("temperature") == ["low", "medium", "high"]
    size = model.space_size()
    assert size["full"] == 110592
    assert size["valid"] == 110592


def test_parse_validation():
    with pytest.raises(ValueError):
        ctdplan.FactorModel.parse('{"factors": []}')


def test_plan_generation_and_coverage(model):
    plan = ctdplan.generate_plan(model, strength=2, seed=1)
    assert plan.row_count <= 24
    report = ctdplan.coverage_report(model, plan, strength=2)
    assert report["required"] == 507
    assert report["coverage_ratio"] == 1.0
    assert report["missing"] == []
    # determinism
    again = ctdplan.generate_plan(model, strength=2, seed=1)
    assert again.to_csv(model) == plan.to_csv(model)


def test_fixed_values_propagate(model):
    plan = ctdplan.generate_plan(model, strength=2, fixed={"temperature": "low"}, seed=2)
    for row in plan.rows(model):
        assert row["temperature"] == "low"


def test_proportion_ztest_reference_value():
    z, p = ctdplan.proportion_ztest(30, 30, 29, 30)
    assert abs(p - 0.313) < 1e-3
    assert abs(z - 1.0084389681792196) < 1e-12


def test_holm_sidak():
    adjusted = ctdplan.holm_sidak_adjust([0.01, 0.02, 0.30])
    assert adjusted == pytest.approx([0.029701, 0.0396, 0.30], abs=1e-9)


def test_significance_symbol():
    assert ctdplan.significance_symbol(0.0005) == "***"
    assert ctdplan.significance_symbol(0.058) == "."
    assert ctdplan.significance_symbol(0.1) == ""


def test_scores_and_pairwise(model):
    plan = ctdplan.generate_plan(model, strength=2, seed=3)
    lines = ["row_id,sample_id,score"]
    for rid in range(1, plan.row_count + 1):
        ones = 30 if rid == 2 else max(0, 22 - rid)
        for s in range(30):
            lines.append(f"{rid},s{s},{1 if s < ones else 0}")
    ds = ctdplan.ScoreDataset.ingest(plan, "\n".join(lines) + "\n")
    assert ds.observation_count == plan.row_count * 30

    stats = ctdplan.sample_stats(ds)
    by_row = {r["row_id"]: r for r in stats["rows"]}
    assert by_row[2]["mean"] == 1.0

    report = ctdplan.pairwise_report(ds, alpha=0.05)
    assert report["best_row"] == 2
    assert len(report["pairs"]) == plan.row_count * (plan.row_count - 1) // 2


def test_simulation_and_regression(model):
    sim = ctdplan.run_hierarchical_simulation(model, generations=3, samples_per_row=30, seed=5)
    plan, scores, theta = sim["plan"], sim["scores"], sim["theta"]
    assert scores.observation_count == plan.row_count * 30
    assert all(0.0 <= t <= 1.0 for t in theta)

    result = ctdplan.analyze_regression(model, plan, scores, interaction_order=1)
    assert len(result["coefficients"]) == 19
    assert len(result["wald"]) == 16
    df = {row["term"]: row["df"] for row in result["wald"]}
    assert df["temperature"] == 2
    assert df["modelType"] == 2
    assert df["maxNewToken"] == 2


def test_effect_injection(model):
    plan = ctdplan.generate_plan(model, strength=2, seed=4)
    sim = ctdplan.simulate_with_effects(
        model, plan, {"Intercept": 0.0, "temperature=medium": math.log(9.0)},
        samples_per_row=10, seed=6)
    rows = plan.rows(model)
    for row, theta in zip(rows, sim["theta"]):
        expected = 0.9 if row["temperature"] == "medium" else 0.5
        assert theta == pytest.approx(expected, abs=1e-12)


def test_validation_error_type(model):
    plan = ctdplan.generate_plan(model, strength=2, seed=9)
    with pytest.raises(ValueError):
        ctdplan.ScoreDataset.ingest(plan, "row_id,sample_id,score\n1,a,0.5\n")
