"""Sphere constants and the spherical-cap eigenvalue.

Run with ``python3 demos/01_sphere_constants.py``.
"""

# %% The Yamabe constant of the round sphere
import math

import numpy as np

from yamabe_thresholds.constants import sphere_volume, spin_renormalize, yamabe_sphere
from yamabe_thresholds.model_space import CapParams, cap_volume, spherical_cap_lambda
from yamabe_thresholds.rounding import round_nearest

print(" m   vol(S^m)     Q*(S^m)   rounded")
for m in range(3, 16):
    q = yamabe_sphere(m)
    print(f"{m:2d}  {sphere_volume(m):9.5f}  {q:10.5f}  {round_nearest(q):6.1f}")

# In dimension three the constant has the closed form 6 2^(2/3) pi^(4/3).
print("\nQ*(S^3) =", yamabe_sphere(3), "vs", 6 * 2 ** (2 / 3) * math.pi ** (4 / 3))

# %% Killing spinors give the same number
# The Dirac eigenvalue of a Killing spinor normalized in L^q is (m/2) vol^(1/m);
# squaring and rescaling by 4(m-1)/m lands exactly on Q*(S^m).
for m in (3, 5, 8):
    lam = 0.5 * m * sphere_volume(m) ** (1 / m)
    print(f"m={m}: 4(m-1)/m lambda^2 = {spin_renormalize(m, lam):.12f}, Q* = {yamabe_sphere(m):.12f}")

# %% Shrinking caps
# On a geodesic ball of radius r the eigenvalue scales with vol(B_r)^(1/m), so
# it decreases to 0 with the radius and recovers the full sphere at r = pi.
m = 6
for r in (0.01, 0.1, 0.5, 1.0, math.pi / 2, 2.5, math.pi):
    lam = spherical_cap_lambda(CapParams(m, r))
    print(f"r={r:7.4f}  vol={cap_volume(m, r):11.6e}  lambda={lam:8.5f}  "
          f"renormalized={spin_renormalize(m, lam):9.4f}")

# %% Resolution limit near the full sphere
# The volume of the missing cap shrinks like (pi - r)^m.  Close to pi the
# change in lambda drops below one unit in the last place.
rs = np.linspace(math.pi - 0.05, math.pi, 6)
for r in rs:
    print(f"r={r:.6f}  lambda={spherical_cap_lambda(CapParams(9, float(r))):.17g}")
