"""Probability of the optimal portfolio as the oracle power n grows.

Small n leaves u_n close to g, so near-optimal portfolios look alike.
Large n pushes every u_n(z) towards zero, including the optimum, because
f_min and f_max are only estimates.  The useful window sits in between.
"""
from qsera.runner import preset_config, sweep_power

curve = sweep_power(preset_config(), list(range(1, 101, 3)) + [150, 200, 300])
peak_n, peak_p = max(curve, key=lambda t: t[1])

for n, p in curve:
    bar = "#" * int(round(60 * p))
    print(f"n={n:3d}  {p:.4f}  {bar}")
print(f"\npeak at n = {peak_n} with P(1001) = {peak_p:.4f}")
