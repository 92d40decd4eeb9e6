"""Decision-boundary estimation in the plane of two selection variables.

A k-nearest-neighbor vote on standardized coordinates gives the
probability that a unit at each grid node belongs to the unconstrained
optimum; the 0.5 level set of that probability field, traced by marching
squares, is the estimated boundary between the treat and no-treat
regions.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVariable

__all__ = [
    "ProbabilityGrid",
    "BoundaryPolyline",
    "estimate_probability_grid",
    "extract_boundary",
    "default_k",
]


@dataclass(frozen=True)
class ProbabilityGrid:
    """P(optimal treatment | x, z) evaluated on a rectangular grid."""

    x_ticks: np.ndarray
    z_ticks: np.ndarray
    prob: np.ndarray  # shape (len(x_ticks), len(z_ticks))
    k: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "x_ticks": self.x_ticks.tolist(),
            "z_ticks": self.z_ticks.tolist(),
            "prob": [row.tolist() for row in self.prob],
        }


@dataclass(frozen=True)
class BoundaryPolyline:
    """Level-set segments, each a pair of (x, z) endpoints in data units."""

    segments: tuple[tuple[tuple[float, float], tuple[float, float]], ...]
    level: float = 0.5

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "segments": [[list(a), list(b)] for a, b in self.segments],
        }


def default_k(n: int) -> int:
    return max(1, round(n ** 0.5))


def _standardizer(values: np.ndarray, name: str):
    mean = values.mean()
    sd = values.std()
    if sd == 0:
        raise DegenerateVariable(f"selection variable {name!r} has zero variance")
    return mean, sd


def estimate_probability_grid(
    x: np.ndarray,
    z: np.ndarray,
    t_star: np.ndarray,
    resolution: int = 100,
    k: int | None = None,
    margin: float = 0.05,
) -> ProbabilityGrid:
    """k-NN vote for membership in the optimum set at each grid node.

    Distances are Euclidean after per-variable standardization (the two
    selection variables usually carry incommensurate units); distance
    ties are broken toward the smaller unit index, so the output is
    deterministic.  The grid spans the observed ranges extended by
    ``margin`` on each side.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    labels = np.asarray(t_star, dtype=float)
    n = x.shape[0]
    if k is None:
        k = default_k(n)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")

    mx, sx = _standardizer(x, "x")
    mz, sz = _standardizer(z, "z")
    xs = (x - mx) / sx
    zs = (z - mz) / sz

    def ticks(values: np.ndarray) -> np.ndarray:
        lo, hi = values.min(), values.max()
        pad = margin * (hi - lo)
        return np.linspace(lo - pad, hi + pad, resolution)

    x_ticks = ticks(x)
    z_ticks = ticks(z)
    xt = (x_ticks - mx) / sx
    zt = (z_ticks - mz) / sz

    def prob_rows(row_indices) -> np.ndarray:
        out = np.empty((len(row_indices), len(z_ticks)))
        for row, i in enumerate(row_indices):
            # distance from every sample to each node of this grid row
            d2 = (xs[:, None] - xt[i]) ** 2 + (zs[:, None] - zt[None, :]) ** 2
            # stable sort keeps the smaller unit index first on ties
            nearest = np.argsort(d2, axis=0, kind="stable")[:k]
            out[row] = labels[nearest].mean(axis=0)
        return out

    threads = int(os.environ.get("POLOPT_THREADS", "1") or "1")
    if threads > 1:
        chunks = np.array_split(np.arange(len(x_ticks)), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(prob_rows, chunks))
        prob = np.vstack(parts)
    else:
        prob = prob_rows(np.arange(len(x_ticks)))

    return ProbabilityGrid(x_ticks=x_ticks, z_ticks=z_ticks, prob=prob, k=k)


def _interp(c1: float, c2: float, v1: float, v2: float, level: float) -> float:
    if v1 == v2:
        return 0.5 * (c1 + c2)
    return c1 + (level - v1) * (c2 - c1) / (v2 - v1)


def extract_boundary(grid: ProbabilityGrid, level: float = 0.5) -> BoundaryPolyline:
    """Marching-squares contour of the probability field.

    Node values >= level count as inside; crossing points are placed by
    linear interpolation along cell edges, so adjacent cells share exact
    endpoints.  The two ambiguous saddle cases are resolved by the cell
    average.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie strictly between 0 and 1")
    xt, zt, p = grid.x_ticks, grid.z_ticks, grid.prob
    segments: list[tuple[tuple[float, float], tuple[float, float]]] = []

    for i in range(len(xt) - 1):
        for j in range(len(zt) - 1):
            # cell corners, counter-clockwise from (i, j)
            v00, v10 = p[i, j], p[i + 1, j]
            v11, v01 = p[i + 1, j + 1], p[i, j + 1]
            case = (
                (1 if v00 >= level else 0)
                | (2 if v10 >= level else 0)
                | (4 if v11 >= level else 0)
                | (8 if v01 >= level else 0)
            )
            if case in (0, 15):
                continue

            # crossing points on the four cell edges (data units)
            bottom = (_interp(xt[i], xt[i + 1], v00, v10, level), zt[j])
            top = (_interp(xt[i], xt[i + 1], v01, v11, level), zt[j + 1])
            left = (xt[i], _interp(zt[j], zt[j + 1], v00, v01, level))
            right = (xt[i + 1], _interp(zt[j], zt[j + 1], v10, v11, level))

            if case in (1, 14):
                segments.append((left, bottom))
            elif case in (2, 13):
                segments.append((bottom, right))
            elif case in (4, 11):
                segments.append((right, top))
            elif case in (8, 7):
                segments.append((top, left))
            elif case in (3, 12):
                segments.append((left, right))
            elif case in (6, 9):
                segments.append((bottom, top))
            elif case in (5, 10):
                center_inside = 0.25 * (v00 + v10 + v11 + v01) >= level
                if (case == 5) == center_inside:
                    segments.append((left, top))
                    segments.append((bottom, right))
                else:
                    segments.append((left, bottom))
                    segments.append((right, top))

    return BoundaryPolyline(segments=tuple(segments), level=level)
