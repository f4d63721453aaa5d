"""k-coverage experiment planning and binary-score analysis."""

from ._core import (
    FactorModel,
    Plan,
    ScoreDataset,
    ValidationError,
    __version__,
    analyze_regression,
    coverage_report,
    generate_plan,
    holm_sidak_adjust,
    pairwise_report,
    proportion_ztest,
    run_hierarchical_simulation,
    sample_stats,
    significance_symbol,
    simulate_with_effects,
)

__all__ = [
    "FactorModel",
    "Plan",
    "ScoreDataset",
    "ValidationError",
    "__version__",
    "analyze_regression",
    "coverage_report",
    "generate_plan",
    "holm_sidak_adjust",
    "pairwise_report",
    "proportion_ztest",
    "run_hierarchical_simulation",
    "sample_stats",
    "significance_symbol",
    "simulate_with_effects",
]
