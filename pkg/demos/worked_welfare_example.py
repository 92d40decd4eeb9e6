"""A six-unit welfare accounting example, worked end to end.

Six units with known per-unit treatment effects; the program happened to
treat the first three.  Welfare is the sum of effects over treated units,
the unconstrained optimum treats exactly the units with positive effect,
and regret is the welfare left on the table.
"""

import numpy as np

from polopt import actual_welfare, optimal_assignment

tau = np.array([9.0, -4.0, 5.0, 6.0, -2.0, 6.0])
assign = np.array([1, 1, 1, 0, 0, 0])

report = actual_welfare(tau, assign)
t_star = optimal_assignment(tau)

print("per-unit effects:   ", tau.tolist())
print("actual assignment:  ", assign.tolist())
print("optimal assignment: ", t_star.tolist())
print()
print(f"realized welfare  W  = {report.total_welfare:g}")
print(f"optimum welfare   W* = {report.w_star:g}")
print(f"regret            R  = {report.regret:g}")
