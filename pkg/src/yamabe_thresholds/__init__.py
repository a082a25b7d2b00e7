"""Explicit bounds for conformal and spinorial Yamabe-type invariants.

Submodules:

- ``constants``: sphere volumes and Yamabe constants of round spheres
- ``model_space``: the model spaces H_c^{k+1} x S^{m-k-1} and spherical caps
- ``codim3``: the codimension-3 lower bound and its minimization
- ``aggregate``: registry of known bounds and the dimension-wise minima
- ``relations``: inequality graph with interval propagation
- ``cli``: command-line front end
"""

from .aggregate import builtin_registry, lambda_spin_m, sigma_spin_lower
from .codim3 import closed_form_bound, infimum_L, table3
from .constants import sphere_volume, spin_renormalize, yamabe_sphere
from .relations import build_paper_graph, check_consistency

__all__ = [
    "builtin_registry",
    "build_paper_graph",
    "check_consistency",
    "closed_form_bound",
    "infimum_L",
    "lambda_spin_m",
    "sigma_spin_lower",
    "sphere_volume",
    "spin_renormalize",
    "table3",
    "yamabe_sphere",
]
