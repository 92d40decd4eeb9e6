"""Loading and summarizing program datasets from delimited text.

A dataset is the usual program-evaluation triple: an outcome, a binary
treatment indicator, and a covariate matrix, one row per unit.  Earnings
variables are kept in whatever unit the file uses (thousands of dollars
for the bundled NSW extract); nothing is rescaled silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import (
    EmptyDataset,
    MissingColumn,
    NonBinaryTreatment,
    NonNumericCell,
)

__all__ = [
    "ColumnSchema",
    "PolicyDataset",
    "load_dataset",
    "write_dataset",
    "summarize",
    "compensated_mean",
]


def compensated_mean(values: Iterable[float]) -> float:
    """Mean via exact compensated summation, left-to-right over row order."""
    vals = list(values)
    if not vals:
        raise ValueError("mean of empty sequence")
    return math.fsum(vals) / len(vals)


@dataclass(frozen=True)
class ColumnSchema:
    """Names of the outcome, treatment, and covariate columns in a file."""

    outcome_col: str
    treatment_col: str
    covariate_cols: tuple[str, ...] = ()
    id_col: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "covariate_cols", tuple(self.covariate_cols))
        roles = [self.outcome_col, self.treatment_col, *self.covariate_cols]
        if len(set(roles)) != len(roles):
            raise ValueError("outcome, treatment, and covariate columns must be disjoint")

    @property
    def all_columns(self) -> tuple[str, ...]:
        cols = [self.outcome_col, self.treatment_col, *self.covariate_cols]
        if self.id_col is not None:
            cols.append(self.id_col)
        return tuple(cols)


@dataclass(frozen=True)
class PolicyDataset:
    """Immutable in-memory dataset: outcome, 0/1 treatment, covariate matrix."""

    outcome: np.ndarray
    treatment: np.ndarray
    covariates: np.ndarray  # shape (n, p)
    covariate_names: tuple[str, ...]
    ids: tuple = field(default=())

    def __post_init__(self):
        for arr in (self.outcome, self.treatment, self.covariates):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return self.outcome.shape[0]

    @property
    def n_treated(self) -> int:
        return int(self.treatment.sum())

    def column(self, name: str) -> np.ndarray:
        """Covariate column by name."""
        from .errors import UnknownVariable

        try:
            j = self.covariate_names.index(name)
        except ValueError:
            raise UnknownVariable(f"unknown covariate {name!r}") from None
        return self.covariates[:, j]


def _parse_cell(text: str, column: str, row: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NonNumericCell(
            f"non-numeric value {text!r} in column {column!r}, data row {row}"
        ) from None
    if not math.isfinite(value):
        raise NonNumericCell(
            f"non-finite value {text!r} in column {column!r}, data row {row}"
        )
    return value


def load_dataset(source: IO[str], schema: ColumnSchema, delimiter: str = ",") -> PolicyDataset:
    """Parse delimited text with a header row into a PolicyDataset.

    Any empty or non-numeric cell in a schema column is a hard error;
    the protocol assumes complete (Y, X, T) information.  Row order is
    preserved.
    """
    header_line = source.readline()
    if header_line == "":
        raise EmptyDataset("input has no header row")
    header = [h.strip() for h in header_line.rstrip("\r\n").split(delimiter)]
    positions = {}
    for name in schema.all_columns:
        if name not in header:
            raise MissingColumn(f"column {name!r} not found in header {header}")
        positions[name] = header.index(name)

    outcome, treatment, ids = [], [], []
    cov_rows = []
    row = 0
    for line in source:
        line = line.rstrip("\r\n")
        if line == "":
            continue
        row += 1
        cells = line.split(delimiter)
        y = _parse_cell(cells[positions[schema.outcome_col]], schema.outcome_col, row)
        t_raw = _parse_cell(cells[positions[schema.treatment_col]], schema.treatment_col, row)
        if t_raw not in (0.0, 1.0):
            raise NonBinaryTreatment(
                f"treatment value {t_raw!r} outside {{0, 1}} in data row {row}"
            )
        outcome.append(y)
        treatment.append(int(t_raw))
        cov_rows.append(
            [_parse_cell(cells[positions[c]], c, row) for c in schema.covariate_cols]
        )
        if schema.id_col is not None:
            ids.append(cells[positions[schema.id_col]].strip())
        else:
            ids.append(str(row))

    if row == 0:
        raise EmptyDataset("input has a header but no data rows")

    return PolicyDataset(
        outcome=np.asarray(outcome, dtype=float),
        treatment=np.asarray(treatment, dtype=int),
        covariates=np.asarray(cov_rows, dtype=float).reshape(row, len(schema.covariate_cols)),
        covariate_names=tuple(schema.covariate_cols),
        ids=tuple(ids),
    )


def write_dataset(ds: PolicyDataset, sink: IO[str], schema: ColumnSchema, delimiter: str = ",") -> None:
    """Write a dataset back to delimited text (round-trips with load_dataset)."""

    def fmt(x: float) -> str:
        return format(x, ".17g")

    header = [schema.outcome_col, schema.treatment_col, *schema.covariate_cols]
    if schema.id_col is not None:
        header.append(schema.id_col)
    sink.write(delimiter.join(header) + "\n")
    for i in range(ds.n):
        cells = [fmt(ds.outcome[i]), str(int(ds.treatment[i]))]
        cells += [fmt(v) for v in ds.covariates[i]]
        if schema.id_col is not None:
            cells.append(str(ds.ids[i]))
        sink.write(delimiter.join(cells) + "\n")


def summarize(ds: PolicyDataset) -> list[dict]:
    """Per-column summary statistics by treatment arm.

    Returns one row per (column, arm) with mean, sd, min, max, and the
    arm count.  Means use compensated summation in row order so repeated
    runs are bit-stable.
    """
    rows = []
    columns = [("outcome", ds.outcome)] + [
        (name, ds.covariates[:, j]) for j, name in enumerate(ds.covariate_names)
    ]
    for arm, label in ((1, "treated"), (0, "control")):
        mask = ds.treatment == arm
        count = int(mask.sum())
        for name, values in columns:
            sub = values[mask]
            if count == 0:
                rows.append({"column": name, "arm": label, "n": 0, "mean": None,
                             "sd": None, "min": None, "max": None})
                continue
            mean = compensated_mean(sub)
            if count > 1:
                sd = math.sqrt(math.fsum((v - mean) ** 2 for v in sub) / (count - 1))
            else:
                sd = 0.0
            rows.append({
                "column": name, "arm": label, "n": count, "mean": mean,
                "sd": sd, "min": float(sub.min()), "max": float(sub.max()),
            })
    return rows
