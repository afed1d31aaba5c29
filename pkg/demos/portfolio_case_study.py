"""Four-asset index tracking.

Pick the subset of assets A..D whose equal-weight return and variance best
match a benchmark with two holdings.  The objective is expanded into a
multilinear polynomial, rescaled to [0, 1], raised to the 24th power and
used as a phase oracle for two Grover iterations.
"""
import numpy as np

from qsera.portfolio import (
    REFERENCE_PROBLEM,
    format_published_table_report,
    published_table_comparison,
)
from qsera.runner import preset_config, run_qsera

problem = REFERENCE_PROBLEM
values = problem.objective_values()

print("classical scan (bit i = asset i, printed D..A):")
for z in np.argsort(values)[:5]:
    print(f"  {z:04b}  f = {values[z]:.6f}")

print("\ncoefficients against the printed table (x1e-3, x0.1, x1):")
print(format_published_table_report(published_table_comparison(problem)))

for name in ("paper-portfolio", "paper-portfolio-wide"):
    cfg = preset_config(name)
    res = run_qsera(cfg)
    print(f"\n{name}: f_max = {cfg.f_max_est}, n = {cfg.n_power}, m = {res.plan.m}")
    for z in np.argsort(res.probabilities)[::-1][:4]:
        print(f"  {res.bitstring(z)}  P = {res.probabilities[z]:.4f}")

print("\nWith f_max = 0.015 the run ranks 1001 then 0101, matching the classical scan.")
print("With f_max = 0.15, g stays above 0.9 everywhere, so u_24 is near 1 for most states")
print("and the oracle phase is close to -1 for all of them.  1111 has the largest f, its")
print("u_24 is about 0.11, and as the odd phase out it is the state that gets amplified.")
