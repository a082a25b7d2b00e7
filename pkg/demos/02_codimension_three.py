"""Lower bound for the codimension-3 invariant, step by step.

Run with ``python3 demos/02_codimension_three.py``.
"""

# %% Ingredients for one dimension
import numpy as np

from yamabe_thresholds import codim3
from yamabe_thresholds.constants import yamabe_sphere

m = 8
N = (m - 2) * (m - 3)
print(f"m={m}, N={N}")
print("Q*(S^m)       =", yamabe_sphere(m))
print("Qhat0         =", codim3.qhat0(m), "(lower bound at c = 0)")

# L_m(s), s = c^2, interpolates between Qhat0 and Q*(S^m).
for s in (0.0, 0.05, 0.25, 1.0):
    print(f"L_{m}({s:4.2f}) = {codim3.L(m, s):.6f}")

# %% Where the minimum sits
# dL/ds has the sign of f(s) = s^(2/m+1) A0 + s^(2/m) A1 + A2, which changes
# sign exactly once.  The bracket [0, c2^2] traps the zero.
f = codim3.f_poly(m)
print(f"A0={f.A0:.4f} A1={f.A1:.4f} A2={f.A2:.4f}")
print("c2^2          =", codim3.c2(m) ** 2, " f there:", f(codim3.c2(m) ** 2))
print("printed c2^2  =", codim3.c2_printed(m) ** 2, " f there:", f(codim3.c2_printed(m) ** 2))
root = codim3.root_f(m)
print("zero of f     =", root)

res = codim3.infimum_L(m)
c_grid, v_grid = codim3.grid_minimum(m)
print(f"infimum       = {res.value:.12f} at c = {res.c_star:.6f} ({res.method})")
print(f"grid scan     = {v_grid:.12f} at c = {c_grid:.5f}")
print(f"closed form   = {codim3.closed_form_bound(m):.6f} (weaker, explicit)")

# %% Agreement of f with the finite-difference slope
check = codim3.sign_equivalence(m)
print(f"sign check: ok={check.ok}, {check.checked} points compared")

# %% The table for m = 7..15
print("\n m   Q*(S^m)   L")
for row in codim3.table3():
    print(f"{row.m:2d}  {row.q_star:7.1f}  {row.L_bound:6.1f}")
print("#", codim3.ROUNDING_NOTE)

# %% Growth with the dimension
ms = np.arange(6, 41)
ratios = [codim3.infimum_L(int(k)).value / yamabe_sphere(int(k)) for k in ms]
print("\ninf L / Q*(S^m):", " ".join(f"{r:.3f}" for r in ratios[::5]))
