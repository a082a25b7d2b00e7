"""Model spaces M_c^{m,k} = H_c^{k+1} x S^{m-k-1} and predicates on them.

``H_c^{k+1}`` is hyperbolic space rescaled to scalar curvature -c^2 k(k+1)
(Euclidean space when c = 0), written in polar form dr^2 + sinh_c(r)^2 sigma^k.

For c = 1 the model space is conformal to S^m minus an equatorial S^k.  That
conformal map is kept as metadata only (:data:`C1_CONFORMAL_PICTURE`); nothing
numeric depends on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from ._quadrature import adaptive_simpson
from .constants import sphere_volume, yamabe_sphere

__all__ = [
    "ModelSpaceParams",
    "CapParams",
    "C1_CONFORMAL_PICTURE",
    "sinh_c",
    "scalar_curvature",
    "ls_invertible",
    "codim_condition",
    "decay_convergent",
    "decay_integral",
    "cap_volume",
    "spherical_cap_lambda",
    "q_star_mm2",
]

C1_CONFORMAL_PICTURE = {
    "map": "H^{k+1} x S^{m-k-1} -> S^m minus S^k",
    "metric": "g_1 = sinh^2(t) sigma^{k+1} + dt^2 + sigma^{m-k-1} = f^2 u^* sigma^m",
    "conformal_factor": "printed as f(t) = cosh^2 t together with cosh t = 1/sin r, "
    "r = dist(., S^k); the intended power of cosh is ambiguous",
}


@dataclass(frozen=True)
class ModelSpaceParams:
    """The triple (m, k, c) identifying M_c^{m,k}."""

    m: int
    k: int
    c: float

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if not 0 <= self.k <= self.m - 1:
            raise ValueError(f"k must satisfy 0 <= k <= m-1, got k={self.k}, m={self.m}")
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"c must lie in [0, 1], got {self.c}")

    @property
    def sphere_dim(self) -> int:
        return self.m - self.k - 1


@dataclass(frozen=True)
class CapParams:
    """Geodesic ball B_r of radius r in the round S^m."""

    m: int
    r: float

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if not 0.0 < self.r <= math.pi:
            raise ValueError(f"cap radius must lie in (0, pi], got {self.r}")


def sinh_c(c: float, r: float) -> float:
    """Warping function of H_c: sinh(c r)/c, and r itself at c = 0."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c}")
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if c == 0.0:
        return float(r)
    return math.sinh(c * r) / c


def scalar_curvature(p: ModelSpaceParams) -> float:
    """Scalar curvature of g_c: -c^2 k(k+1) plus (n)(n-1) of the S^n factor."""
    n = p.sphere_dim
    return -p.c * p.c * p.k * (p.k + 1) + n * (n - 1)


def ls_invertible(p: ModelSpaceParams, s: float) -> bool:
    """Sufficient condition for the Dirac operator on M_c^{m,k} to be L^s-invertible.

    Returns True when (m-k-1)/2 > c k |1/s - 1/2|.  A False result does not
    mean the operator fails to be invertible; only one direction is known.
    ``s = math.inf`` is allowed.
    """
    if not (s >= 1.0):
        raise ValueError(f"s must lie in [1, inf], got {s}")
    gap = 0.5 if math.isinf(s) else abs(1.0 / s - 0.5)
    return (p.m - p.k - 1) / 2.0 > p.c * p.k * gap


def codim_condition(p: ModelSpaceParams) -> bool:
    """(m-2)(m-k-1) > c k, evaluated exactly.

    The equivalent form (m-1)(m-k-2) > -(1-c)k is evaluated as well; the two
    must agree and a mismatch is an internal error.
    """
    m, k = p.m, p.k
    c = Fraction(p.c)
    first = (m - 2) * (m - k - 1) > c * k
    second = (m - 1) * (m - k - 2) > -(1 - c) * k
    if first != second:
        raise AssertionError(f"codimension condition forms disagree at {p}")
    return first


def decay_convergent(m: int, k: int, case: Literal["spinor", "function"]) -> bool:
    """Whether the L^2 norm of the transported sphere solution is finite.

    Along the hyperbolic factor the integrand behaves like exp(e t) with
    e = 1-m+k for the Killing spinor and e = 2-m+k for the constant function.
    """
    if not 0 <= k <= m - 1:
        raise ValueError(f"k must satisfy 0 <= k <= m-1, got k={k}, m={m}")
    if case == "spinor":
        return 1 - m + k < 0
    if case == "function":
        return 2 - m + k < 0
    raise ValueError(f"case must be 'spinor' or 'function', got {case!r}")


def decay_integral(m: int, k: int, case: Literal["spinor", "function"], T: float) -> float:
    """Diagnostic: integral of cosh^e(t) sinh^k(t) over [0, T] (e as in decay_convergent)."""
    decay_convergent(m, k, case)  # validates arguments
    e = 1 - m if case == "spinor" else 2 - m
    return adaptive_simpson(lambda t: math.cosh(t) ** e * math.sinh(t) ** k, 0.0, T, abstol=1e-10)


def cap_volume(m: int, r: float) -> float:
    """Volume of the geodesic ball of radius r in S^m."""
    p = CapParams(m, r)
    integral = adaptive_simpson(lambda t: math.sin(t) ** (p.m - 1), 0.0, p.r, abstol=1e-12)
    return sphere_volume(p.m - 1) * integral


def spherical_cap_lambda(p: CapParams) -> float:
    """Nonlinear Dirac eigenvalue lambda_r = (m/2) vol(B_r)^(1/m) of the cap solution.

    The exponent 1/m is the one for which the renormalized value at r = pi
    equals Q*(S^m).
    """
    if p.m < 3:
        raise ValueError(f"m must be >= 3, got {p.m}")
    return 0.5 * p.m * cap_volume(p.m, p.r) ** (1.0 / p.m)


def q_star_mm2(m: int, c: float) -> float:
    """Q*(M_c^{m,m-2}) = c^(2/m) Q*(S^m)."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c}")
    return c ** (2.0 / m) * yamabe_sphere(m)
