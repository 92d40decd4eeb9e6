"""Welfare accounting for realized and optimal treatment assignments.

Welfare is the sum of per-unit effects over the units a rule assigns to
treatment.  The unconstrained optimum treats exactly the units with a
strictly positive effect; the shortfall of any other assignment against
that optimum is its regret.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NoTreatedUnits

__all__ = [
    "WelfareReport",
    "EffectDecomposition",
    "optimal_assignment",
    "actual_welfare",
    "regret",
    "decompose_effect",
]


@dataclass(frozen=True)
class WelfareReport:
    """Welfare of one assignment, with the unconstrained optimum alongside.

    ``avg_welfare`` is None (serialized as JSON null) when no unit is
    treated; it is never NaN.
    """

    total_welfare: float
    avg_welfare: float | None
    n_treated: int
    share_treated: float
    w_star: float
    regret: float

    def to_dict(self) -> dict:
        return {
            "total_welfare": self.total_welfare,
            "avg_welfare": self.avg_welfare,
            "n_treated": self.n_treated,
            "share_treated": self.share_treated,
            "w_star": self.w_star,
            "regret": self.regret,
        }


@dataclass(frozen=True)
class EffectDecomposition:
    """Split of the per-beneficiary effect into a design-free part and a
    selection-induced part: gamma = alpha + beta."""

    gamma: float
    alpha: float
    beta: float


def _check_lengths(tau: np.ndarray, assign: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    tau = np.asarray(tau, dtype=float)
    assign = np.asarray(assign)
    if tau.shape != assign.shape:
        raise LengthMismatch(f"tau has length {tau.shape}, assignment {assign.shape}")
    if not np.isin(assign, (0, 1)).all():
        raise ValueError("assignment values must be 0 or 1")
    return tau, assign.astype(int)


def optimal_assignment(tau: np.ndarray) -> np.ndarray:
    """Treat exactly the units with tau > 0 (strict; zeros are excluded)."""
    tau = np.asarray(tau, dtype=float)
    return (tau > 0).astype(int)


def _welfare_sum(tau: np.ndarray, assign: np.ndarray) -> float:
    # fsum keeps the reduction exact, hence independent of chunking.
    return math.fsum(tau[assign == 1])


def actual_welfare(tau: np.ndarray, assign: np.ndarray) -> WelfareReport:
    """Welfare of ``assign`` plus the unconstrained optimum and regret."""
    tau, assign = _check_lengths(tau, assign)
    n = tau.shape[0]
    total = _welfare_sum(tau, assign)
    n_treated = int(assign.sum())
    w_star = _welfare_sum(tau, optimal_assignment(tau))
    return WelfareReport(
        total_welfare=total,
        avg_welfare=(total / n_treated) if n_treated > 0 else None,
        n_treated=n_treated,
        share_treated=n_treated / n if n > 0 else 0.0,
        w_star=w_star,
        regret=w_star - total,
    )


def regret(tau: np.ndarray, assign: np.ndarray) -> float:
    """Foregone welfare of ``assign`` against the unconstrained optimum."""
    return actual_welfare(tau, assign).regret


def decompose_effect(tau: np.ndarray, assign: np.ndarray, alpha: float) -> EffectDecomposition:
    """Per-beneficiary effect of a rule, split against a design-free alpha.

    gamma is the average effect per treated unit under ``assign``; beta is
    whatever selection adds on top of ``alpha`` (typically the ATE).
    """
    report = actual_welfare(tau, assign)
    if report.n_treated == 0:
        raise NoTreatedUnits("effect decomposition needs at least one treated unit")
    gamma = report.avg_welfare
    return EffectDecomposition(gamma=gamma, alpha=alpha, beta=gamma - alpha)
