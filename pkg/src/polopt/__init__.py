"""Threshold-based optimal policy assignment toolkit.

Estimates per-unit treatment effects by regression adjustment, accounts
for realized/optimal welfare and regret, and searches univariate and
quadrant threshold rules under policymaker constraints.
"""

__version__ = "0.1.0"

from .boundary_estimator import (
    BoundaryPolyline,
    ProbabilityGrid,
    estimate_probability_grid,
    extract_boundary,
)
from .cate_ra import (
    ArmModel,
    CateEstimates,
    ModelSpec,
    ate_dim,
    cate_histogram,
    estimate_cate,
    fit_arm,
)
from .data_ingest import ColumnSchema, PolicyDataset, load_dataset, summarize, write_dataset
from .threshold_search import (
    Constraints,
    CurvePoint,
    Objective,
    ThresholdGrid,
    ThresholdSearchResult,
    apply_constraints,
    assign_conjunction,
    assign_quadrant,
    assign_univariate,
    build_grid,
    scenario_menu,
    search_bivariate,
    search_multivariate,
    search_univariate,
)
from .welfare_core import (
    EffectDecomposition,
    WelfareReport,
    actual_welfare,
    decompose_effect,
    optimal_assignment,
    regret,
)
