"""Exhaustive grid search for threshold-based assignment rules.

A univariate rule treats a unit when its selection variable clears a
cutoff (weak inequality) and, by default, the unit also belongs to the
unconstrained optimum; the bivariate quadrant rule conjoins two cutoffs.
Every grid point is evaluated (no early exit), constraints are applied
as feasibility flags, and the argmax is reported with an angle-solution
diagnostic when it sits on the grid boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data_ingest import PolicyDataset
from .errors import DegenerateVariable, LengthMismatch, NoFeasiblePoint
from .welfare_core import WelfareReport, actual_welfare

__all__ = [
    "ThresholdGrid",
    "Objective",
    "Constraints",
    "CurvePoint",
    "ThresholdSearchResult",
    "build_grid",
    "assign_univariate",
    "assign_quadrant",
    "assign_conjunction",
    "search_univariate",
    "search_bivariate",
    "search_multivariate",
    "scenario_menu",
    "apply_constraints",
]


@dataclass(frozen=True)
class ThresholdGrid:
    """Strictly increasing candidate thresholds for one selection variable."""

    values: np.ndarray
    source: str  # "observed-unique", "quantile(K)", or "explicit"
    degenerate: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.size == 0:
            raise ValueError("threshold grid is empty")
        if values.size > 1 and not (np.diff(values) > 0).all():
            raise ValueError("threshold grid must be strictly increasing")
        object.__setattr__(self, "values", values)
        values.setflags(write=False)


@dataclass(frozen=True)
class Objective:
    """What the search maximizes: total welfare or welfare per treated unit.

    Total welfare under the screened rule is non-increasing in the cutoff,
    so total-maximization degenerates to the smallest cutoff; the average
    objective is the interesting one and the CLI default.
    """

    kind: str = "average_welfare"

    def __post_init__(self):
        if self.kind not in ("total_welfare", "average_welfare"):
            raise ValueError(f"unknown objective kind {self.kind!r}")

    def value(self, report: WelfareReport) -> float | None:
        if self.kind == "total_welfare":
            return report.total_welfare
        return report.avg_welfare


@dataclass(frozen=True)
class Constraints:
    """Treated-share window and/or budget cap; all fields optional."""

    min_share: float | None = None
    max_share: float | None = None
    max_treated: int | None = None

    def __post_init__(self):
        if (
            self.min_share is not None
            and self.max_share is not None
            and self.min_share > self.max_share
        ):
            raise ValueError("min_share exceeds max_share")

    def feasible(self, report: WelfareReport) -> bool:
        if self.min_share is not None and report.share_treated < self.min_share:
            return False
        if self.max_share is not None and report.share_treated > self.max_share:
            return False
        if self.max_treated is not None and report.n_treated > self.max_treated:
            return False
        return True


@dataclass(frozen=True)
class CurvePoint:
    """One evaluated grid point: cutoff(s), welfare report, feasibility."""

    c: float | tuple[float, ...]
    report: WelfareReport
    feasible: bool

    def to_dict(self) -> dict:
        c = list(self.c) if isinstance(self.c, tuple) else self.c
        return {"c": c, "feasible": self.feasible, **self.report.to_dict()}


@dataclass(frozen=True)
class ThresholdSearchResult:
    """Full welfare curve/surface plus the feasible argmax."""

    curve: tuple[CurvePoint, ...]
    best: CurvePoint | None
    angle_solution: bool
    selection_vars: tuple[str, ...]
    objective: Objective

    def to_dict(self) -> dict:
        return {
            "selection_vars": list(self.selection_vars),
            "objective": self.objective.kind,
            "angle_solution": self.angle_solution,
            "best": self.best.to_dict() if self.best is not None else None,
            "curve": [p.to_dict() for p in self.curve],
        }


def build_grid(ds: PolicyDataset, var: str, source: str = "observed-unique") -> ThresholdGrid:
    """Candidate thresholds for one covariate.

    ``observed-unique`` uses the sorted distinct observed values (an
    empirical argmax cannot improve between them); ``quantile:K`` uses K
    equally spaced quantiles, deduplicated.  A constant column yields a
    one-point grid flagged degenerate.
    """
    x = ds.column(var)
    if source == "observed-unique":
        values = np.unique(x)
    elif source.startswith("quantile:"):
        k = int(source.split(":", 1)[1])
        if k < 2:
            raise ValueError("quantile grid needs K >= 2")
        values = np.unique(np.quantile(x, np.linspace(0.0, 1.0, k)))
        source = f"quantile({k})"
    else:
        raise ValueError(f"unknown grid source {source!r}")
    return ThresholdGrid(values=values, source=source, degenerate=(values.size == 1))


def _as_binary(vec: np.ndarray, n: int, name: str) -> np.ndarray:
    vec = np.asarray(vec)
    if vec.shape[0] != n:
        raise LengthMismatch(f"{name} has length {vec.shape[0]}, expected {n}")
    return vec.astype(int)


def assign_univariate(t_star: np.ndarray, x: np.ndarray, c: float) -> np.ndarray:
    """Screened threshold rule: treat when in the optimum set and x >= c."""
    x = np.asarray(x, dtype=float)
    t_star = _as_binary(t_star, x.shape[0], "t_star")
    return t_star * (x >= c).astype(int)


def assign_conjunction(
    t_star: np.ndarray, conditions: Sequence[tuple[np.ndarray, float]]
) -> np.ndarray:
    """Generalized quadrant rule: conjunction of weak cutoffs over any
    number of selection variables, screened by the optimum set."""
    assign = np.asarray(t_star).astype(int).copy()
    n = assign.shape[0]
    for x, c in conditions:
        x = np.asarray(x, dtype=float)
        if x.shape[0] != n:
            raise LengthMismatch(f"selection variable has length {x.shape[0]}, expected {n}")
        assign *= (x >= c).astype(int)
    return assign


def assign_quadrant(
    t_star: np.ndarray, x: np.ndarray, z: np.ndarray, c_x: float, c_z: float
) -> np.ndarray:
    """Upper-right quadrant rule over two selection variables."""
    return assign_conjunction(t_star, [(x, c_x), (z, c_z)])


def _evaluate_curve(
    tau: np.ndarray,
    t_star: np.ndarray,
    variables: Sequence[np.ndarray],
    grids: Sequence[ThresholdGrid],
    cons: Constraints,
) -> list[CurvePoint]:
    points = []
    for combo in itertools.product(*(g.values for g in grids)):
        assign = assign_conjunction(t_star, list(zip(variables, combo)))
        report = actual_welfare(tau, assign)
        c = float(combo[0]) if len(combo) == 1 else tuple(float(v) for v in combo)
        points.append(CurvePoint(c=c, report=report, feasible=cons.feasible(report)))
    return points


def _pick_best(points: Sequence[CurvePoint], obj: Objective) -> CurvePoint | None:
    # Strict improvement only: first (lexicographically smallest) cutoff
    # wins ties, treating more units at equal welfare.
    best = None
    best_val = None
    for point in points:
        if not point.feasible or point.report.n_treated == 0:
            continue
        val = obj.value(point.report)
        if best is None or val > best_val:
            best, best_val = point, val
    return best


def _is_angle(best: CurvePoint | None, grids: Sequence[ThresholdGrid]) -> bool:
    if best is None:
        return False
    c = best.c if isinstance(best.c, tuple) else (best.c,)
    return any(
        ci == g.values[0] or ci == g.values[-1] for ci, g in zip(c, grids)
    )


def search_multivariate(
    tau: np.ndarray,
    t_star: np.ndarray,
    variables: Sequence[np.ndarray],
    grids: Sequence[ThresholdGrid],
    obj: Objective = Objective(),
    cons: Constraints = Constraints(),
    var_names: Sequence[str] = (),
) -> ThresholdSearchResult:
    """Exhaustive search over the Cartesian product of the grids.

    Cost is the product of the grid sizes; beyond two selection variables
    this grows exponentially.
    """
    points = _evaluate_curve(tau, t_star, variables, grids, cons)
    best = _pick_best(points, obj)
    return ThresholdSearchResult(
        curve=tuple(points),
        best=best,
        angle_solution=_is_angle(best, grids),
        selection_vars=tuple(var_names) or tuple(f"x{i}" for i in range(len(grids))),
        objective=obj,
    )


def search_univariate(
    tau: np.ndarray,
    t_star: np.ndarray,
    x: np.ndarray,
    grid: ThresholdGrid,
    obj: Objective = Objective(),
    cons: Constraints = Constraints(),
    var_name: str = "x",
) -> ThresholdSearchResult:
    return search_multivariate(tau, t_star, [x], [grid], obj, cons, [var_name])


def search_bivariate(
    tau: np.ndarray,
    t_star: np.ndarray,
    x: np.ndarray,
    z: np.ndarray,
    grid_x: ThresholdGrid,
    grid_z: ThresholdGrid,
    obj: Objective = Objective(),
    cons: Constraints = Constraints(),
    var_names: tuple[str, str] = ("x", "z"),
) -> ThresholdSearchResult:
    return search_multivariate(tau, t_star, [x, z], [grid_x, grid_z], obj, cons, var_names)


def scenario_menu(
    tau: np.ndarray,
    t_star: np.ndarray,
    fixed: tuple[np.ndarray, float],
    varying: np.ndarray,
    grid: ThresholdGrid,
    obj: Objective = Objective(),
) -> list[CurvePoint]:
    """Welfare menu over the varying variable's grid with the other
    selection variable's cutoff held fixed.

    One point per grid value, in grid order; rows that select nobody
    carry an undefined average welfare rather than being dropped.
    """
    fixed_x, fixed_c = fixed
    points = []
    for c in grid.values:
        assign = assign_conjunction(t_star, [(fixed_x, fixed_c), (varying, float(c))])
        report = actual_welfare(tau, assign)
        points.append(CurvePoint(c=float(c), report=report, feasible=True))
    return points


def apply_constraints(curve: Sequence[CurvePoint], cons: Constraints,
                      obj: Objective = Objective()) -> CurvePoint:
    """Re-flag a curve under new constraints and return the feasible argmax."""
    if not curve:
        raise ValueError("empty curve")
    reflagged = [
        CurvePoint(c=p.c, report=p.report, feasible=cons.feasible(p.report)) for p in curve
    ]
    best = _pick_best(reflagged, obj)
    if best is None:
        raise NoFeasiblePoint("no grid point satisfies the constraints with >= 1 treated unit")
    return best
