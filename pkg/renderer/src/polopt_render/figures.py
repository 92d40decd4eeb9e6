"""The four figure kinds, each a function from parsed documents to axes.

Every function returns the number of data points drawn, so callers (and
tests) can confirm nothing was silently truncated.  Rendering is
deterministic: a fixed style, no timestamps in the output file, and a
fixed hash salt for SVG element ids.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .errors import EmptyInput, SchemaMismatch

SUPPORTED_SCHEMA = "1"

FIGURE_KINDS = ("histogram", "curve", "quadrant", "menu")

plt.rcParams["svg.hashsalt"] = "polopt-render"


def load_document(path: str | Path, required: tuple[str, ...]) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaMismatch(f"cannot read JSON document {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaMismatch(f"{path}: expected a JSON object")
    version = doc.get("schema_version")
    if version != SUPPORTED_SCHEMA:
        raise SchemaMismatch(
            f"{path}: schema_version {version!r}, this renderer supports "
            f"{SUPPORTED_SCHEMA!r}")
    missing = [key for key in required if key not in doc]
    if missing:
        raise SchemaMismatch(f"{path}: missing keys {missing}")
    return doc


def _centers(edges):
    return [0.5 * (a + b) for a, b in zip(edges, edges[1:])]


def render_histogram(ax_all, ax_treated, doc: dict) -> int:
    edges = doc["bin_edges"]
    counts = doc["tau_counts"]
    treated = doc["tau_treated_counts"]
    if len(edges) != len(counts) + 1 or len(counts) != len(treated):
        raise SchemaMismatch("histogram bin edges and counts are inconsistent")
    if sum(counts) == 0:
        raise EmptyInput("histogram has zero total count")
    widths = [b - a for a, b in zip(edges, edges[1:])]
    ax_all.bar(_centers(edges), counts, width=widths, color="#4878a8",
               edgecolor="white", linewidth=0.5)
    ax_treated.bar(_centers(edges), treated, width=widths, color="#b05050",
                   edgecolor="white", linewidth=0.5)
    ax_all.set_title("all units")
    ax_treated.set_title("treated units")
    for ax in (ax_all, ax_treated):
        ax.set_xlabel("estimated per-unit effect")
        ax.set_ylabel("count")
        ax.axvline(0.0, color="black", linewidth=0.8, linestyle=":")
    return len(counts) + len(treated)


def _objective_value(row: dict, objective: str):
    return row["avg_welfare"] if objective == "average_welfare" else row["total_welfare"]


def render_curve(ax, doc: dict) -> int:
    if len(doc["selection_vars"]) != 1:
        raise SchemaMismatch("curve figures need a univariate search document")
    curve = doc["curve"]
    if not curve:
        raise EmptyInput("search curve has no grid points")
    objective = doc["objective"]
    var = doc["selection_vars"][0]

    xs = [row["c"] for row in curve]
    ys = [_objective_value(row, objective) for row in curve]
    drawn = [(x, y) for x, y in zip(xs, ys) if y is not None]
    ax.plot([p[0] for p in drawn], [p[1] for p in drawn],
            marker="o", markersize=3, color="#4878a8", linewidth=1.2)

    # shade threshold ranges where the rule is infeasible (or undefined)
    for row, x in zip(curve, xs):
        if not row["feasible"] or _objective_value(row, objective) is None:
            ax.axvspan(x - 0.5, x + 0.5, color="#cccccc", alpha=0.4, linewidth=0)

    best = doc["best"]
    if best is None:
        ax.annotate("no feasible optimum", xy=(0.5, 0.5),
                    xycoords="axes fraction", ha="center", fontsize=11)
    else:
        ax.plot([best["c"]], [_objective_value(best, objective)],
                marker="*", markersize=14, color="#b05050", zorder=5)
        note = f"c* = {best['c']:g}"
        if doc.get("angle_solution"):
            note += " (grid boundary)"
        ax.annotate(note, xy=(best["c"], _objective_value(best, objective)),
                    xytext=(6, 6), textcoords="offset points", fontsize=9)
    ax.set_xlabel(f"threshold on {var}")
    ax.set_ylabel(objective.replace("_", " "))
    return len(curve)


def render_quadrant(ax, boundary_doc: dict, search_doc: dict | None = None) -> int:
    scatter = boundary_doc["scatter"]
    xs, zs, t_star = scatter["x"], scatter["z"], scatter["t_star"]
    if not (len(xs) == len(zs) == len(t_star)):
        raise SchemaMismatch("scatter coordinate lists have unequal lengths")
    if not xs:
        raise EmptyInput("boundary document has no scatter points")

    inside = [i for i, t in enumerate(t_star) if t == 1]
    outside = [i for i, t in enumerate(t_star) if t != 1]
    ax.scatter([xs[i] for i in outside], [zs[i] for i in outside],
               s=12, color="#9aa7b5", label="outside optimum", zorder=2)
    ax.scatter([xs[i] for i in inside], [zs[i] for i in inside],
               s=12, color="#b05050", label="in optimum", zorder=3)

    for (a, b) in boundary_doc["polyline"]["segments"]:
        ax.plot([a[0], b[0]], [a[1], b[1]], color="#303030", linewidth=1.0, zorder=4)

    if search_doc is not None:
        if len(search_doc["selection_vars"]) != 2:
            raise SchemaMismatch("quadrant cutoffs need a bivariate search document")
        best = search_doc["best"]
        if best is not None:
            cx, cz = best["c"]
            ax.axvline(cx, color="#4878a8", linestyle="--", linewidth=1.0)
            ax.axhline(cz, color="#4878a8", linestyle="--", linewidth=1.0)

    ax.set_xlabel(boundary_doc["x_var"])
    ax.set_ylabel(boundary_doc["z_var"])
    ax.legend(loc="best", fontsize=8)
    return len(xs)


def render_menu(ax, doc: dict) -> int:
    rows = doc["rows"]
    if not rows:
        raise EmptyInput("scenario menu has no rows")
    defined = [(r["c"], r["avg_welfare"], r["n_treated"])
               for r in rows if r["avg_welfare"] is not None]
    undefined = [r["c"] for r in rows if r["avg_welfare"] is None]

    if defined:
        ax.plot([d[0] for d in defined], [d[1] for d in defined],
                marker="o", markersize=5, color="#4878a8", linewidth=1.0)
        for c, avg, n in defined:
            ax.annotate(f"n={n}", xy=(c, avg), xytext=(0, 7),
                        textcoords="offset points", ha="center", fontsize=7)
    if undefined:
        # rows selecting nobody: marked on the baseline, not dropped
        floor = min((d[1] for d in defined), default=0.0)
        ax.plot(undefined, [floor] * len(undefined), marker="x", linestyle="none",
                color="#9aa7b5")

    fixed = f"{doc['fixed_var']} >= {doc['fixed_threshold']:g}"
    ax.set_title(f"scenario menu given {fixed}")
    ax.set_xlabel(f"threshold on {doc['varying_var']}")
    ax.set_ylabel("average welfare per treated unit")
    return len(defined) + len(undefined)


def render(kind: str, inputs: list[str | Path], out: str | Path,
           title: str | None = None) -> int:
    """Draw one figure of ``kind`` from ``inputs`` and save it to ``out``.

    Returns the number of data points drawn.  The saved file carries no
    timestamp metadata, so re-rendering identical inputs produces
    identical bytes.
    """
    if kind not in FIGURE_KINDS:
        raise SchemaMismatch(f"unknown figure kind {kind!r}; expected one of {FIGURE_KINDS}")
    if not inputs:
        raise SchemaMismatch("at least one input document is required")

    if kind == "histogram":
        doc = load_document(inputs[0], ("bin_edges", "tau_counts", "tau_treated_counts"))
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2), sharex=True)
        count = render_histogram(ax1, ax2, doc)
    elif kind == "curve":
        doc = load_document(inputs[0], ("selection_vars", "objective", "best", "curve"))
        fig, ax = plt.subplots(figsize=(6, 4))
        count = render_curve(ax, doc)
    elif kind == "quadrant":
        boundary = load_document(inputs[0], ("x_var", "z_var", "polyline", "scatter"))
        search = None
        if len(inputs) > 1:
            search = load_document(inputs[1], ("selection_vars", "best"))
        fig, ax = plt.subplots(figsize=(6, 5))
        count = render_quadrant(ax, boundary, search)
    else:
        doc = load_document(
            inputs[0], ("fixed_var", "fixed_threshold", "varying_var", "rows"))
        fig, ax = plt.subplots(figsize=(6, 4))
        count = render_menu(ax, doc)

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    try:
        fig.savefig(out, metadata={"Date": None})
    finally:
        plt.close(fig)
    return count
