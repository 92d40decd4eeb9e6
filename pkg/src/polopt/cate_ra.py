"""Per-unit treatment effects by regression adjustment.

One least-squares regression per arm; the per-unit effect is the gap
between the two arms' predictions at each unit's covariates.  The ATE is
also estimated by the treated-control difference in means, which is the
design-based benchmark under randomization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data_ingest import PolicyDataset, compensated_mean
from .errors import EmptyArm, TooFewUnits, UnknownVariable

__all__ = [
    "ModelSpec",
    "ArmModel",
    "CateEstimates",
    "fit_arm",
    "estimate_cate",
    "ate_dim",
    "cate_histogram",
]


@dataclass(frozen=True)
class ModelSpec:
    """Ordered regression terms; a trailing ``^2`` marks a squared covariate.

    Example: ``ModelSpec(("re74", "re75", "age", "age^2", "nodegree"))``.
    """

    covariate_terms: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "covariate_terms", tuple(self.covariate_terms))
        if len(set(self.covariate_terms)) != len(self.covariate_terms):
            raise ValueError("duplicate terms in model spec")

    @classmethod
    def parse(cls, terms: Sequence[str]) -> "ModelSpec":
        return cls(tuple(t.strip() for t in terms if t.strip()))

    def design_matrix(self, ds: PolicyDataset) -> np.ndarray:
        """Intercept column followed by one column per term."""
        cols = [np.ones(ds.n)]
        for term in self.covariate_terms:
            if term.endswith("^2"):
                base = term[:-2]
                cols.append(ds.column(base) ** 2)
            else:
                cols.append(ds.column(term))
        return np.column_stack(cols)

    def validate_against(self, ds: PolicyDataset) -> None:
        for term in self.covariate_terms:
            base = term[:-2] if term.endswith("^2") else term
            if base not in ds.covariate_names:
                raise UnknownVariable(f"model term {term!r} references unknown covariate {base!r}")


@dataclass(frozen=True)
class ArmModel:
    """Least-squares fit of the outcome on one treatment arm."""

    arm: str  # "treated" or "control"
    intercept: float
    coefficients: np.ndarray
    residual_variance: float
    rank_ok: bool

    def predict(self, design: np.ndarray) -> np.ndarray:
        beta = np.concatenate(([self.intercept], self.coefficients))
        return design @ beta


@dataclass(frozen=True)
class CateEstimates:
    """Per-unit effects and the two ATE estimates.

    ``ate_ra`` is the mean of ``tau`` over the whole sample;
    ``tau_treated`` is the effect restricted to the treated units, whose
    mean is the regression-adjusted effect on the treated.
    """

    tau: np.ndarray
    tau_treated: np.ndarray
    ate_ra: float
    ate_dim: float
    dim_se: float

    @property
    def ate_ra_treated(self) -> float:
        """Mean effect over the treated units (the effect on the treated)."""
        return compensated_mean(self.tau_treated)


def fit_arm(ds: PolicyDataset, arm: str, spec: ModelSpec) -> ArmModel:
    """Fit the outcome regression for one arm.

    Solved by SVD least squares (an orthogonal decomposition, not normal
    equations); a rank-deficient design is reported via ``rank_ok`` and
    prediction falls back to the minimum-norm solution.
    """
    if arm not in ("treated", "control"):
        raise ValueError(f"arm must be 'treated' or 'control', got {arm!r}")
    spec.validate_against(ds)
    mask = ds.treatment == (1 if arm == "treated" else 0)
    n_arm = int(mask.sum())
    n_terms = len(spec.covariate_terms)
    if n_arm < n_terms + 1:
        raise TooFewUnits(
            f"{arm} arm has {n_arm} units, needs at least {n_terms + 1} for {n_terms} terms"
        )
    design = spec.design_matrix(ds)[mask]
    y = ds.outcome[mask]
    beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ beta
    dof = n_arm - (n_terms + 1)
    resid_var = float(residuals @ residuals / dof) if dof > 0 else 0.0
    return ArmModel(
        arm=arm,
        intercept=float(beta[0]),
        coefficients=beta[1:].copy(),
        residual_variance=resid_var,
        rank_ok=(rank == n_terms + 1),
    )


def ate_dim(ds: PolicyDataset) -> tuple[float, float]:
    """Difference in mean outcomes (treated minus control) with its
    standard error from per-arm sample variances."""
    y1 = ds.outcome[ds.treatment == 1]
    y0 = ds.outcome[ds.treatment == 0]
    if len(y1) == 0 or len(y0) == 0:
        raise EmptyArm("difference in means needs both arms non-empty")
    m1 = compensated_mean(y1)
    m0 = compensated_mean(y0)
    v1 = math.fsum((v - m1) ** 2 for v in y1) / (len(y1) - 1) if len(y1) > 1 else 0.0
    v0 = math.fsum((v - m0) ** 2 for v in y0) / (len(y0) - 1) if len(y0) > 1 else 0.0
    return m1 - m0, math.sqrt(v1 / len(y1) + v0 / len(y0))


def estimate_cate(ds: PolicyDataset, spec: ModelSpec) -> CateEstimates:
    """Per-unit effect for every unit, treated and control alike."""
    treated_model = fit_arm(ds, "treated", spec)
    control_model = fit_arm(ds, "control", spec)
    design = spec.design_matrix(ds)
    tau = treated_model.predict(design) - control_model.predict(design)
    dim, dim_se = ate_dim(ds)
    return CateEstimates(
        tau=tau,
        tau_treated=tau[ds.treatment == 1].copy(),
        ate_ra=compensated_mean(tau),
        ate_dim=dim,
        dim_se=dim_se,
    )


def cate_histogram(est: CateEstimates, bins: int) -> dict:
    """Histogram data for the full-sample and treated-subset effect
    distributions, on shared bin edges spanning [min tau, max tau]."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    lo, hi = float(est.tau.min()), float(est.tau.max())
    if lo == hi:
        hi = lo + 1.0  # degenerate support; single informative bin
    edges = np.linspace(lo, hi, bins + 1)
    counts_all, _ = np.histogram(est.tau, bins=edges)
    counts_treated, _ = np.histogram(est.tau_treated, bins=edges)
    return {
        "bin_edges": edges.tolist(),
        "tau_counts": counts_all.tolist(),
        "tau_treated_counts": counts_treated.tolist(),
    }
