"""Grover search on six qubits with a perfect oracle.

The target is z* = 14 among N = 64 states.  We run the gate-level circuit
(uniform preparation, phase oracle built from CCX ladders, diffusion) and
compare every iteration with the two-amplitude recursion.
"""
from qsera.cli import grover_demo_series
from qsera.grover import optimal_iterations

K, TARGET = 6, 14

plan = optimal_iterations(1 << K, "ceil")
print(f"N = {plan.N}, m_real = {plan.m_real:.4f}, running m = {plan.m} iterations\n")

sim, ref, deviation = grover_demo_series(K, TARGET, plan.m + 3)
print(" k   a_other    a_target   P(z*)     recursion P(z*)")
for s, r in zip(sim, ref):
    marker = "  <- planned stop" if s[1] == plan.m else ""
    print(f"{s[1]:2d}  {s[2]:+.6f}  {s[3]:+.6f}  {s[4]:.6f}  {r[4]:.6f}{marker}")

print(f"\nlargest gap between simulator and recursion: {deviation:.2e}")
print("Past the planned stop the state rotates beyond the target and P(z*) falls again.")
