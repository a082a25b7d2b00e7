"""Sphere constants: volumes, the conformal Yamabe constant and exponents.

Every Gamma value needed here has a half-integer argument, so it is
computed by the exact recursion Gamma(x + 1) = x Gamma(x) starting from
Gamma(1) = 1 or Gamma(1/2) = sqrt(pi).  No series approximation is used.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction

import mpmath

__all__ = [
    "MAX_DIMENSION",
    "SphereConstants",
    "gamma_half_integer",
    "sphere_volume",
    "yamabe_sphere",
    "yamabe_sphere_mp",
    "spin_renormalize",
    "sphere_constants",
    "conformal_laplacian_coefficient",
]

#: Largest dimension accepted by the sphere routines (Gamma overflows soon after).
MAX_DIMENSION = 200


def _as_half_integer(x) -> Fraction:
    try:
        frac = Fraction(x)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"not a half-integer: {x!r}") from exc
    if frac <= 0 or (2 * frac).denominator != 1:
        raise ValueError(f"gamma_half_integer needs a positive half-integer, got {x!r}")
    return frac


def gamma_half_integer(x) -> float:
    """Gamma function at a positive half-integer ``x`` (1/2, 1, 3/2, ...).

    ``x`` may be an int, a float with an exact half-integer value, or a
    :class:`fractions.Fraction`.

    >>> gamma_half_integer(4)
    6.0
    """
    frac = _as_half_integer(x)
    if frac.denominator == 1:
        # integer argument: (n-1)! exactly, converted once
        return float(math.factorial(int(frac) - 1))
    value = math.sqrt(math.pi)
    y = Fraction(1, 2)
    while y < frac:
        value *= float(y)
        y += 1
    return value


def _check_dimension(m: int, lowest: int) -> None:
    if isinstance(m, bool) or int(m) != m:
        raise ValueError(f"dimension must be an integer, got {m!r}")
    if m < lowest:
        raise ValueError(f"dimension must be >= {lowest}, got {m}")
    if m > MAX_DIMENSION:
        raise ValueError(f"dimension must be <= {MAX_DIMENSION}, got {m}")


@lru_cache(maxsize=None, typed=True)
def sphere_volume(m: int) -> float:
    """Volume of the unit round sphere S^m, ``2 pi^((m+1)/2) / Gamma((m+1)/2)``."""
    _check_dimension(m, 1)
    return 2.0 * math.pi ** ((m + 1) / 2) / gamma_half_integer(Fraction(m + 1, 2))


def conformal_laplacian_coefficient(m: int) -> float:
    """a = 4(m-1)/(m-2), the coefficient of the Laplacian in the conformal Laplacian."""
    _check_dimension(m, 3)
    return 4.0 * (m - 1) / (m - 2)


@lru_cache(maxsize=None, typed=True)
def yamabe_sphere(m: int) -> float:
    """Conformal Yamabe constant of the round sphere, ``m(m-1) vol(S^m)^(2/m)``.

    Only defined for m >= 3 (the conformal Laplacian degenerates at m = 2).
    """
    _check_dimension(m, 3)
    return m * (m - 1) * sphere_volume(m) ** (2.0 / m)


def yamabe_sphere_mp(m: int, dps: int = 40) -> mpmath.mpf:
    """Extended-precision Q*(S^m); used to settle digits near rounding boundaries."""
    _check_dimension(m, 3)
    with mpmath.workdps(dps):
        half = mpmath.mpf(m + 1) / 2
        vol = 2 * mpmath.power(mpmath.pi, half) / mpmath.gamma(half)
        return +(m * (m - 1) * mpmath.power(vol, mpmath.mpf(2) / m))


def spin_renormalize(m: int, lam: float) -> float:
    """Renormalized spinorial value ``4 (m-1)/m * lam**2``.

    With ``lam = (m/2) vol(S^m)^(1/m)`` (the Killing-spinor eigenvalue of the
    round sphere) this returns exactly :func:`yamabe_sphere`.
    """
    _check_dimension(m, 3)
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return 4.0 * (m - 1) / m * lam * lam


@dataclass(frozen=True)
class SphereConstants:
    """Per-dimension constants of S^m and the conformal exponents."""

    m: int
    vol: float
    Q_star: float
    a: Fraction
    p: Fraction
    p_star: Fraction
    q: Fraction
    q_star: Fraction


def sphere_constants(m: int) -> SphereConstants:
    _check_dimension(m, 3)
    return SphereConstants(
        m=m,
        vol=sphere_volume(m),
        Q_star=yamabe_sphere(m),
        a=Fraction(4 * (m - 1), m - 2),
        p=Fraction(2 * m, m - 2),
        p_star=Fraction(2 * m, m + 2),
        q=Fraction(2 * m, m - 1),
        q_star=Fraction(2 * m, m + 1),
    )
