"""Decision boundary between treat and no-treat regions.

Labels each unit by membership in the unconstrained optimum, votes with
k nearest neighbors on a grid over the (age, education) plane, and traces
the 0.5 level set of the resulting probability field with marching
squares.  The printed segments are the polyline a plotting tool would
draw as the decision boundary.
"""

from pathlib import Path

from polopt import ColumnSchema, load_dataset, optimal_assignment
from polopt.boundary_estimator import (
    default_k,
    estimate_probability_grid,
    extract_boundary,
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

age = data.column("age")
education = data.column("education")
k = default_k(data.n)

grid = estimate_probability_grid(age, education, t_star, resolution=60, k=k)
boundary = extract_boundary(grid)

print(f"k = {k} neighbors on a {len(grid.x_ticks)}x{len(grid.z_ticks)} grid")
print(f"probability field range: [{grid.prob.min():.3f}, {grid.prob.max():.3f}]")
print(f"boundary polyline: {len(boundary.segments)} segments at level {boundary.level}")
print("\nfirst five segments (age, education):")
for (a, b) in boundary.segments[:5]:
    print(f"  ({a[0]:6.2f}, {a[1]:5.2f}) -- ({b[0]:6.2f}, {b[1]:5.2f})")
