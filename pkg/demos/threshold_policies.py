"""Threshold policy search on the NSW experiment.

A realistic program cannot hand each unit its own assignment; it screens
on observable cutoffs.  This script searches cutoff grids for single
variables and for an age x earnings quadrant rule, then prints a scenario
menu a policymaker could choose from.
"""

from pathlib import Path

from polopt import (
    ColumnSchema,
    Objective,
    build_grid,
    load_dataset,
    optimal_assignment,
    scenario_menu,
    search_bivariate,
    search_univariate,
)
from polopt.cate_ra import ModelSpec, estimate_cate

DATA = Path(__file__).resolve().parent.parent / "data" / "nsw_dw.csv"

schema = ColumnSchema(
    outcome_col="re78",
    treatment_col="treat",
    covariate_cols=("re74", "re75", "age", "education",
                    "nodegree", "married", "black", "hispanic"),
    id_col="id",
)
model = ModelSpec.parse(
    ["re74", "re75", "age", "age^2", "nodegree", "married", "black", "hispanic"])

with open(DATA, encoding="utf-8") as fh:
    data = load_dataset(fh, schema)

est = estimate_cate(data, model)
t_star = optimal_assignment(est.tau)
avg = Objective("average_welfare")

print("univariate cutoff rules (average welfare per treated unit):")
for var in ("age", "education", "re74"):
    result = search_univariate(est.tau, t_star, data.column(var),
                               build_grid(data, var), avg, var_name=var)
    best = result.best
    note = "  [argmax at grid boundary]" if result.angle_solution else ""
    print(f"  {var:10s} c* = {best.c:<10.4g} avg welfare {best.report.avg_welfare:.4f} "
          f"treating {best.report.n_treated}{note}")

biv = search_bivariate(est.tau, t_star, data.column("age"), data.column("re75"),
                       build_grid(data, "age"), build_grid(data, "re75"),
                       avg, var_names=("age", "re75"))
c_age, c_re75 = biv.best.c
print(f"\nquadrant rule: age >= {c_age:g} and re75 >= {c_re75:.4g} "
      f"-> avg welfare {biv.best.report.avg_welfare:.4f}, "
      f"treating {biv.best.report.n_treated}")

print("\nscenario menu (age cutoff fixed at 27, education cutoff varying):")
rows = scenario_menu(est.tau, t_star, (data.column("age"), 27.0),
                     data.column("education"), build_grid(data, "education"), avg)
print(f"  {'education':>10s} {'treated':>8s} {'total':>9s} {'average':>9s}")
for p in rows:
    avg_str = f"{p.report.avg_welfare:9.4f}" if p.report.avg_welfare is not None else "      -- "
    print(f"  {p.c:10.0f} {p.report.n_treated:8d} "
          f"{p.report.total_welfare:9.3f} {avg_str}")
