"""Known bounds, the dimension-wise minimum and the spinorial invariant.

Run with ``python3 demos/03_spin_bounds.py``.
"""

# %% The registry
from collections import Counter

from yamabe_thresholds import aggregate

reg = aggregate.builtin_registry()
print(Counter(e.provenance for e in reg))
for e in reg:
    if e.provenance == "external-citation":
        print(" ", e.invariant, (e.m, e.k), e.direction, e.value, "|", e.citation)

# %% Minimum over the admissible codimensions
# For k = m-3 the bound is recomputed; smaller k rely on the published row.
for m in range(5, 14):
    terms = [aggregate.best_lower_bound(m, k, reg) for k in range(2, m - 2)]
    print(f"m={m:2d}  terms={[round(t, 2) for t in terms]}  min={aggregate.lambda_spin_m(m, reg)}")

# %% Case analysis for closed spin manifolds
# Unknown terms stay symbolic rather than being dropped.
for m in (6, 8, 9, 10, 11):
    for variant in ("simply-connected", "fundamental-group"):
        expr = aggregate.sigma_spin_lower(m, variant, reg)
        print(f"m={m:2d} {variant:18s} {expr.render()}")

print("\nopen items:")
for c in aggregate.CONJECTURES:
    print(" -", c)
