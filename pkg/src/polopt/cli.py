"""Command-line driver for the threshold-based policy assignment protocol.

Commands mirror the protocol stages: ``estimate`` (per-unit effects),
``welfare`` (realized vs. optimal welfare and regret), ``search``
(univariate or quadrant threshold optimization), ``menu`` (scenario
table with one cutoff fixed), ``boundary`` (decision-boundary data),
and ``all`` (the whole pipeline plus a run manifest).

Configuration comes from a flat key=value file; command-line flags win
over file values.  All outputs are deterministic JSON (plus CSV sidecars
for plotting).
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .boundary_estimator import default_k, estimate_probability_grid, extract_boundary
from .cate_ra import ModelSpec, cate_histogram, estimate_cate
from .data_ingest import ColumnSchema, load_dataset, summarize
from .errors import DataError, EstimationError, NoFeasiblePoint, PoloptError
from .serialize import SCHEMA_VERSION, write_csv, write_json
from .threshold_search import (
    Constraints,
    Objective,
    ThresholdGrid,
    build_grid,
    scenario_menu,
    search_multivariate,
    search_univariate,
)
from .welfare_core import actual_welfare, optimal_assignment

EXIT_OK = 0
EXIT_DATA = 2
EXIT_ESTIMATION = 3
EXIT_INFEASIBLE = 4

LIST_KEYS = {"covariates", "model", "select"}


def parse_config_file(path: Path) -> dict:
    """Flat ``key = value`` lines; lists are comma-separated; '#' comments."""
    config: dict = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"malformed config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in LIST_KEYS:
            config[key] = [v.strip() for v in value.split(",") if v.strip()]
        else:
            config[key] = value
    return config


def resolve_data_path(name: str) -> Path:
    """Literal path first, then the POLOPT_DATA_DIR search path."""
    path = Path(name)
    if path.exists():
        return path
    data_dir = os.environ.get("POLOPT_DATA_DIR")
    if data_dir and not path.is_absolute():
        candidate = Path(data_dir) / name
        if candidate.exists():
            return candidate
    raise DataError(f"data file not found: {name}")


class Run:
    """Shared state for one CLI invocation: config, dataset, estimates."""

    def __init__(self, config: dict):
        self.config = config
        self.out_dir = Path(config.get("out_dir", "."))
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.data_path = resolve_data_path(config["data"])
        delimiter = {"comma": ",", "tab": "\t"}.get(config.get("delimiter", "comma"))
        if delimiter is None:
            raise DataError(f"delimiter must be comma or tab, got {config['delimiter']!r}")
        schema = ColumnSchema(
            outcome_col=config["outcome"],
            treatment_col=config["treatment"],
            covariate_cols=tuple(config.get("covariates", ())),
            id_col=config.get("id"),
        )
        with open(self.data_path, encoding="utf-8") as fh:
            self.dataset = load_dataset(fh, schema, delimiter)
        self.spec = ModelSpec.parse(config.get("model", ()))
        self.objective = Objective(
            {"avg": "average_welfare", "total": "total_welfare"}[config.get("objective", "avg")]
        )
        self.constraints = Constraints(
            min_share=float(config["min_share"]) if "min_share" in config else None,
            max_share=float(config["max_share"]) if "max_share" in config else None,
            max_treated=int(config["max_treated"]) if "max_treated" in config else None,
        )
        self.grid_source = {"observed": "observed-unique"}.get(
            config.get("grid", "observed"), config.get("grid", "observed")
        )
        self.star_screen = config.get("star_screen", "true") != "false"
        self._estimates = None

    @property
    def estimates(self):
        if self._estimates is None:
            self._estimates = estimate_cate(self.dataset, self.spec)
        return self._estimates

    def screen_vector(self) -> np.ndarray:
        t_star = optimal_assignment(self.estimates.tau)
        if not self.star_screen:
            return np.ones_like(t_star)
        return t_star

    def input_checksum(self) -> str:
        return hashlib.sha256(self.data_path.read_bytes()).hexdigest()


def cmd_estimate(run: Run) -> list[str]:
    est = run.estimates
    write_json(run.out_dir / "cate.json", {
        "schema_version": SCHEMA_VERSION,
        "n": run.dataset.n,
        "n_treated": run.dataset.n_treated,
        "model_terms": list(run.spec.covariate_terms),
        "ate_dim": est.ate_dim,
        "dim_se": est.dim_se,
        "ate_ra": est.ate_ra,
        "ate_ra_treated": est.ate_ra_treated,
        "tau": est.tau.tolist(),
        "tau_treated": est.tau_treated.tolist(),
    })
    bins = int(run.config.get("bins", 20))
    write_json(run.out_dir / "hist.json", {
        "schema_version": SCHEMA_VERSION,
        "bins": bins,
        **cate_histogram(est, bins),
    })
    return ["cate.json", "hist.json"]


def cmd_welfare(run: Run) -> list[str]:
    report = actual_welfare(run.estimates.tau, run.dataset.treatment)
    write_json(run.out_dir / "welfare.json", {
        "schema_version": SCHEMA_VERSION,
        **report.to_dict(),
    })
    return ["welfare.json"]


def _curve_rows(result) -> tuple[list[str], list[list]]:
    multi = result.curve and isinstance(result.curve[0].c, tuple)
    if multi:
        header = [f"c_{name}" for name in result.selection_vars]
    else:
        header = ["c"]
    header += ["n_treated", "share_treated", "total_welfare", "avg_welfare", "feasible"]
    rows = []
    for p in result.curve:
        c = list(p.c) if multi else [p.c]
        r = p.report
        rows.append(c + [r.n_treated, r.share_treated, r.total_welfare,
                         r.avg_welfare, int(p.feasible)])
    return header, rows


def cmd_search(run: Run, variables: list[str]) -> list[str]:
    est = run.estimates
    grids = [build_grid(run.dataset, v, run.grid_source) for v in variables]
    result = search_multivariate(
        est.tau,
        run.screen_vector(),
        [run.dataset.column(v) for v in variables],
        grids,
        run.objective,
        run.constraints,
        var_names=variables,
    )
    tag = "_".join(variables)
    write_json(run.out_dir / f"search_{tag}.json", {
        "schema_version": SCHEMA_VERSION,
        **result.to_dict(),
    })
    header, rows = _curve_rows(result)
    write_csv(run.out_dir / f"curve_{tag}.csv", header, rows)
    outputs = [f"search_{tag}.json", f"curve_{tag}.csv"]
    if result.angle_solution:
        print(f"search {tag}: angle solution at the grid boundary", file=sys.stderr)
    if result.best is None:
        raise NoFeasiblePoint(f"search over {variables} has no feasible optimum")
    return outputs


def _univariate_optimum(run: Run, var: str) -> float:
    result = search_univariate(
        run.estimates.tau,
        run.screen_vector(),
        run.dataset.column(var),
        build_grid(run.dataset, var, run.grid_source),
        run.objective,
        run.constraints,
        var_name=var,
    )
    if result.best is None:
        raise NoFeasiblePoint(f"no feasible threshold for {var!r}")
    return float(result.best.c)


def cmd_menu(run: Run, fixed_var: str, varying_var: str,
             fixed_threshold: float | None = None) -> list[str]:
    if fixed_threshold is None:
        fixed_threshold = _univariate_optimum(run, fixed_var)
    rows = scenario_menu(
        run.estimates.tau,
        run.screen_vector(),
        (run.dataset.column(fixed_var), fixed_threshold),
        run.dataset.column(varying_var),
        build_grid(run.dataset, varying_var, run.grid_source),
        run.objective,
    )
    write_json(run.out_dir / "menu.json", {
        "schema_version": SCHEMA_VERSION,
        "fixed_var": fixed_var,
        "fixed_threshold": fixed_threshold,
        "varying_var": varying_var,
        "rows": [p.to_dict() for p in rows],
    })
    header = [varying_var, "n_treated", "share_treated", "total_welfare", "avg_welfare"]
    csv_rows = [[p.c, p.report.n_treated, p.report.share_treated,
                 p.report.total_welfare, p.report.avg_welfare] for p in rows]
    write_csv(run.out_dir / "menu.csv", header, csv_rows)
    return ["menu.json", "menu.csv"]


def cmd_boundary(run: Run, variables: list[str]) -> list[str]:
    x = run.dataset.column(variables[0])
    z = run.dataset.column(variables[1])
    t_star = optimal_assignment(run.estimates.tau)
    resolution = int(run.config.get("resolution", 100))
    k = int(run.config["k"]) if "k" in run.config else default_k(run.dataset.n)
    grid = estimate_probability_grid(x, z, t_star, resolution=resolution, k=k)
    polyline = extract_boundary(grid)
    write_json(run.out_dir / "boundary.json", {
        "schema_version": SCHEMA_VERSION,
        "x_var": variables[0],
        "z_var": variables[1],
        "grid": grid.to_dict(),
        "polyline": polyline.to_dict(),
        "scatter": {
            "x": x.tolist(),
            "z": z.tolist(),
            "t_star": t_star.tolist(),
        },
    })
    return ["boundary.json"]


def cmd_summary(run: Run) -> list[str]:
    write_json(run.out_dir / "summary.json", {
        "schema_version": SCHEMA_VERSION,
        "n": run.dataset.n,
        "rows": summarize(run.dataset),
    })
    return ["summary.json"]


def cmd_all(run: Run) -> list[str]:
    select = run.config.get("select", [])
    if not 1 <= len(select) <= 2:
        raise DataError("'all' needs one or two selection variables in config key 'select'")
    outputs = []
    steps = []

    def step(name, fn, *args):
        start = time.perf_counter()
        produced = fn(*args)
        steps.append({"step": name, "outputs": produced,
                      "seconds": round(time.perf_counter() - start, 3)})
        outputs.extend(produced)

    step("estimate", cmd_estimate, run)
    step("welfare", cmd_welfare, run)
    for var in select:
        step(f"search_{var}", cmd_search, run, [var])
    if len(select) == 2:
        step("search_" + "_".join(select), cmd_search, run, select)
        step("menu", cmd_menu, run, select[0], select[1])
        step("boundary", cmd_boundary, run, select)
    write_json(run.out_dir / "run_manifest.json", {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "config": {k: v for k, v in sorted(run.config.items())},
        "input_file": str(run.data_path),
        "input_sha256": run.input_checksum(),
        "steps": steps,
    })
    outputs.append("run_manifest.json")
    return outputs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polopt",
        description="Threshold-based optimal policy assignment toolkit",
    )
    parser.add_argument("command",
                        choices=["estimate", "welfare", "search", "menu",
                                 "boundary", "summary", "all"])
    parser.add_argument("--config", type=Path, help="flat key=value config file")
    parser.add_argument("--data", help="input delimited-text file")
    parser.add_argument("--out-dir", help="output directory")
    parser.add_argument("--objective", choices=["avg", "total"])
    parser.add_argument("--grid", help="observed or quantile:K")
    parser.add_argument("--min-share", type=float)
    parser.add_argument("--max-share", type=float)
    parser.add_argument("--max-treated", type=int)
    parser.add_argument("--no-star-screen", action="store_true",
                        help="evaluate the raw cutoff rule without screening "
                             "on the unconstrained optimum")
    parser.add_argument("--vars", help="comma-separated selection variables "
                                       "(search/boundary)")
    parser.add_argument("--fixed", help="fixed variable for menu, "
                                        "optionally NAME:THRESHOLD")
    parser.add_argument("--varying", help="varying variable for menu")
    parser.add_argument("--bins", type=int)
    parser.add_argument("--resolution", type=int)
    parser.add_argument("--k", type=int)
    return parser


def merge_config(args: argparse.Namespace) -> dict:
    config = parse_config_file(args.config) if args.config else {}
    overrides = {
        "data": args.data,
        "out_dir": args.out_dir,
        "objective": args.objective,
        "grid": args.grid,
        "min_share": args.min_share,
        "max_share": args.max_share,
        "max_treated": args.max_treated,
        "bins": args.bins,
        "resolution": args.resolution,
        "k": args.k,
    }
    for key, value in overrides.items():
        if value is not None:
            config[key] = str(value) if not isinstance(value, str) else value
    if args.no_star_screen:
        config["star_screen"] = "false"
    if args.vars:
        config["select"] = [v.strip() for v in args.vars.split(",") if v.strip()]
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = merge_config(args)
        if "data" not in config:
            raise DataError("no data file given (config key 'data' or --data)")
        run = Run(config)
        if args.command == "estimate":
            outputs = cmd_estimate(run)
        elif args.command == "welfare":
            outputs = cmd_welfare(run)
        elif args.command == "summary":
            outputs = cmd_summary(run)
        elif args.command == "search":
            variables = config.get("select", [])
            if not 1 <= len(variables) <= 3:
                raise DataError("search needs 1-3 selection variables (--vars)")
            outputs = cmd_search(run, variables)
        elif args.command == "menu":
            if not args.fixed or not args.varying:
                raise DataError("menu needs --fixed and --varying")
            if ":" in args.fixed:
                name, threshold = args.fixed.split(":", 1)
                outputs = cmd_menu(run, name, args.varying, float(threshold))
            else:
                outputs = cmd_menu(run, args.fixed, args.varying)
        elif args.command == "boundary":
            variables = config.get("select", [])
            if len(variables) != 2:
                raise DataError("boundary needs exactly two selection variables (--vars)")
            outputs = cmd_boundary(run, variables)
        else:
            outputs = cmd_all(run)
    except NoFeasiblePoint as exc:
        print(f"polopt: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DataError, FileNotFoundError, KeyError) as exc:
        print(f"polopt: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EstimationError, PoloptError, ValueError) as exc:
        print(f"polopt: estimation error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    print(f"polopt {args.command}: wrote {', '.join(outputs)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
