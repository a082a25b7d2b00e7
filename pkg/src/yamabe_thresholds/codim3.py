"""Explicit lower bounds for the codimension-3 threshold Lambda*_{m,m-3}.

For k = m-3 the Yamabe constant Q_c of M_c^{m,m-3} is bounded below by

    L_m(s) = ((1-s) 2 Qhat0 + s^(1+2/m) N Q1) / (2 + s (N - 2)),   s = c^2,

with N = (m-2)(m-3), Q1 = Q*(S^m) and Qhat0 an explicit lower bound for
Q_0.  The infimum of L_m over s in [0, 1] is attained at an endpoint or at
the unique zero of

    f(s) = s^(2/m+1) A0 + s^(2/m) A1 + A2

in (0, 1); f has the sign of dL/ds.  Since f(s) > s^(2/m) A1 + A2, f is
positive at s = (-A2/A1)^(m/2) =: c2^2, so the zero is bracketed by
[0, c2^2] and found by bisection.  Note the exponent: c2 itself is
(-A2/A1)^(m/4); :func:`c2_printed` keeps the variant with exponent m/2,
which does not bracket the zero for small m.
Every minimization is cross-checked against a dense grid scan.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from .constants import conformal_laplacian_coefficient, yamabe_sphere, yamabe_sphere_mp
from .model_space import ModelSpaceParams
from .rounding import round_down, round_nearest

__all__ = [
    "Codim3Error",
    "BracketError",
    "ConvergenceError",
    "CrossValidationError",
    "FPoly",
    "InfimumResult",
    "SignCheck",
    "Codim3Report",
    "Table3Row",
    "ROUNDING_NOTE",
    "general_lower_bound",
    "qhat0",
    "qhat0_mp",
    "L",
    "dL_ds",
    "f_poly",
    "c2",
    "c2_printed",
    "c3",
    "root_f",
    "sign_equivalence",
    "grid_minimum",
    "infimum_L",
    "infimum_L_mp",
    "closed_form_bound",
    "codim3_report",
    "table3",
]


GRID_STEP = 1e-5
GRID_RTOL = 1e-8
ROOT_WIDTH = 1e-14
FD_STEP = 1e-6
FD_EXCLUSION = 1e-4

ROUNDING_NOTE = (
    "Q*(S^9) = 147.878 is published with two decimals as 147.88; "
    "rounding to the nearest 0.1 gives 147.9, which is emitted here."
)


class Codim3Error(RuntimeError):
    """Base class for failures of the codimension-3 computation."""


class BracketError(Codim3Error):
    """f does not change sign on the analytic bracket [0, c2^2]."""


class ConvergenceError(Codim3Error):
    """Bisection did not shrink the bracket to the requested width."""


class CrossValidationError(Codim3Error):
    """The critical-point minimum disagrees with the grid scan."""


def _check_m(m: int) -> None:
    if isinstance(m, bool) or int(m) != m or m < 6:
        raise ValueError(f"codimension-3 bounds need an integer m >= 6, got {m!r}")


def general_lower_bound(p: ModelSpaceParams, Q0_lower: float) -> float:
    """Lower bound for Q*(M_c^{m,k}) interpolating between Q0 and Q1 = Q*(S^m).

    Valid for 0 <= k <= m-3.  At c = 0 the bound is Q0_lower; at c = 1 it is
    Q1 when k >= 1 (for k = 0 the interpolation weight vanishes identically
    and the bound stays at Q0_lower).
    """
    m, k, c = p.m, p.k, p.c
    if k > m - 3:
        raise ValueError(f"general lower bound needs k <= m-3, got k={k}, m={m}")
    Q1 = yamabe_sphere(m)
    if not 0.0 < Q0_lower <= Q1 * (1 + 1e-15):
        raise ValueError(f"Q0_lower must lie in (0, Q*(S^m)], got {Q0_lower}")
    ratio = Q0_lower / Q1
    hyp = (k + 1) * k
    sph = (m - k - 1) * (m - k - 2)
    c2sq = c * c
    if c == 0.0 or hyp == 0:
        return Q0_lower
    if c == 1.0:
        return Q1
    weight = c2sq * hyp / ((1.0 - c2sq) * sph + c2sq * hyp)
    return (ratio - weight * (ratio - c ** (2.0 * (m - k - 1) / m))) * Q1


def qhat0(m: int) -> float:
    """Explicit lower bound for Q*(M_0^{m,m-3}) = Q*(R^{m-2} x S^2)."""
    _check_m(m)
    a = conformal_laplacian_coefficient(m)
    a_low = conformal_laplacian_coefficient(m - 3)
    denom = 24.0 ** (3.0 / m) * ((m - 3) * a_low) ** ((m - 3) / m)
    return (
        m * a / denom
        * yamabe_sphere(m - 3) ** ((m - 3) / m)
        * yamabe_sphere(3) ** (3.0 / m)
    )


def qhat0_mp(m: int, dps: int = 40) -> mpmath.mpf:
    _check_m(m)
    with mpmath.workdps(dps):
        mm = mpmath.mpf(m)
        a = 4 * (mm - 1) / (mm - 2)
        a_low = 4 * (mm - 4) / (mm - 5)
        e = (mm - 3) / mm
        denom = mpmath.power(24, 3 / mm) * mpmath.power((mm - 3) * a_low, e)
        return +(
            mm * a / denom
            * mpmath.power(yamabe_sphere_mp(m - 3, dps), e)
            * mpmath.power(yamabe_sphere_mp(3, dps), 3 / mm)
        )


def _L_parts(m: int):
    return qhat0(m), yamabe_sphere(m), (m - 2) * (m - 3)


def L(m: int, s):
    """L_m(s) for s = c^2 in [0, 1]; accepts scalars or numpy arrays."""
    Qh, Q1, N = _L_parts(m)
    s_arr = np.asarray(s, dtype=float)
    if np.any((s_arr < 0.0) | (s_arr > 1.0)):
        raise ValueError("s must lie in [0, 1]")
    val = ((1.0 - s_arr) * 2.0 * Qh + np.power(s_arr, 1.0 + 2.0 / m) * N * Q1) / (
        2.0 + s_arr * (N - 2)
    )
    return float(val) if np.ndim(val) == 0 else val


def dL_ds(m: int, s):
    """Analytic derivative of L_m; equals f(s) N / (2 + s(N-2))^2."""
    N = (m - 2) * (m - 3)
    s_arr = np.asarray(s, dtype=float)
    val = f_poly(m).evaluate(s_arr) * N / (2.0 + s_arr * (N - 2)) ** 2
    return float(val) if np.ndim(val) == 0 else val


class FPoly(NamedTuple):
    """Coefficients of the critical-point function f(s) = s^(2/m+1) A0 + s^(2/m) A1 + A2."""

    m: int
    A0: float
    A1: float
    A2: float

    def evaluate(self, s):
        s_arr = np.asarray(s, dtype=float)
        t = np.power(s_arr, 2.0 / self.m)
        val = t * s_arr * self.A0 + t * self.A1 + self.A2
        return float(val) if np.ndim(val) == 0 else val

    __call__ = evaluate


def f_poly(m: int) -> FPoly:
    Qh, Q1, N = _L_parts(m)
    return FPoly(
        m=m,
        A0=2.0 / m * Q1 * (N - 2),
        A1=2.0 * (2.0 / m + 1.0) * Q1,
        A2=-2.0 * Qh,
    )


def c2(m: int) -> float:
    """c2 = (-A2/A1)^(m/4) = (m Qhat0 / ((m+2) Q1))^(m/4); f(c2^2) > 0."""
    Qh, Q1, _ = _L_parts(m)
    return (m * Qh / ((m + 2) * Q1)) ** (m / 4.0)


def c2_printed(m: int) -> float:
    """(m Qhat0 / ((m+2) Q1))^(m/2).  Not a valid bracket; kept for comparison."""
    Qh, Q1, _ = _L_parts(m)
    return (m * Qh / ((m + 2) * Q1)) ** (m / 2.0)


def c3(m: int) -> float:
    """Minimizer over c of the numerator (1-c^2) 2 Qhat0 + c^(4/m+2) N Q1."""
    Qh, Q1, N = _L_parts(m)
    return (2.0 * m * Qh / ((m + 2) * N * Q1)) ** (m / 4.0)


def root_f(m: int) -> float:
    """The unique zero of f in (0, 1), by bisection on [ulp(0), c2^2]."""
    _check_m(m)
    f = f_poly(m)
    lo, hi = math.ulp(0.0), c2(m) ** 2
    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo < 0.0 < f_hi):
        raise BracketError(
            f"m={m}: f does not change sign on [{lo}, {hi}] (f={f_lo:.3e}, {f_hi:.3e})"
        )
    for _ in range(400):
        if hi - lo <= ROOT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    else:
        raise ConvergenceError(f"m={m}: bisection stalled at width {hi - lo:.3e}")
    if hi - lo > ROOT_WIDTH:
        raise ConvergenceError(f"m={m}: bisection stalled at width {hi - lo:.3e}")
    return 0.5 * (lo + hi)


class SignCheck(NamedTuple):
    ok: bool
    checked: int
    mismatches: tuple


def sign_equivalence(
    m: int, n: int = 1000, h: float = FD_STEP, exclusion: float = FD_EXCLUSION
) -> SignCheck:
    """Compare sign(f) with the sign of a central finite difference of L_m.

    Points within ``exclusion`` of the zero of f are skipped.
    """
    s = (np.arange(n) + 0.5) / n
    root = root_f(m)
    keep = np.abs(s - root) >= exclusion
    s = s[keep]
    fd = (L(m, s + h) - L(m, s - h)) / (2.0 * h)
    fv = f_poly(m).evaluate(s)
    bad = np.sign(fd) != np.sign(fv)
    return SignCheck(ok=not bool(bad.any()), checked=int(s.size), mismatches=tuple(s[bad].tolist()))


def grid_minimum(m: int, step: float = GRID_STEP) -> tuple[float, float]:
    """Minimum of L_m(c^2) over an equispaced c-grid on [0, 1]; returns (c, value)."""
    n = int(round(1.0 / step))
    c = np.linspace(0.0, 1.0, n + 1)
    vals = L(m, c * c)
    i = int(np.argmin(vals))
    return float(c[i]), float(vals[i])


class InfimumResult(NamedTuple):
    c_star: float
    value: float
    s_star: float
    method: str


def _grid_fallback(m: int) -> InfimumResult:
    n = int(round(1.0 / GRID_STEP))
    c_grid = np.linspace(0.0, 1.0, n + 1)
    vals = L(m, c_grid * c_grid)
    i = int(np.argmin(vals))
    a, b = c_grid[max(i - 1, 0)], c_grid[min(i + 1, n)]
    res = minimize_scalar(lambda c: L(m, c * c), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    c_best, v_best = (float(res.x), float(res.fun)) if res.fun < vals[i] else (float(c_grid[i]), float(vals[i]))
    return InfimumResult(c_best, v_best, c_best * c_best, "grid-fallback")


def infimum_L(m: int) -> InfimumResult:
    """inf over c in [0, 1] of L_m(c^2).

    The primary route evaluates L_m at s = 0, s = 1 and the zero of f.  It is
    used only when the finite-difference sign check agrees with f; otherwise a
    grid minimization with local refinement is used and a warning is issued.
    Either way the result is compared against a 1e-5 grid scan.
    """
    _check_m(m)
    check = sign_equivalence(m)
    if check.ok:
        s_root = root_f(m)
        candidates = [(L(m, 0.0), 0.0), (L(m, s_root), s_root), (L(m, 1.0), 1.0)]
        value, s_star = min(candidates)
        result = InfimumResult(math.sqrt(s_star), value, s_star, "critical-point")
    else:
        msg = (f"m={m}: sign of f disagrees with finite-difference dL/ds at "
               f"{len(check.mismatches)} points; using grid minimization")
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        result = _grid_fallback(m)

    _, grid_val = grid_minimum(m)
    if abs(grid_val - result.value) > GRID_RTOL * abs(result.value):
        raise CrossValidationError(
            f"m={m}: {result.method} minimum {result.value!r} vs grid {grid_val!r}"
        )
    return result


def infimum_L_mp(m: int, dps: int = 40) -> mpmath.mpf:
    """Extended-precision inf of L_m, for settling digits near rounding boundaries."""
    _check_m(m)
    with mpmath.workdps(dps):
        Qh, Q1 = qhat0_mp(m, dps), yamabe_sphere_mp(m, dps)
        N = (m - 2) * (m - 3)
        e = mpmath.mpf(2) / m

        def Lmp(s):
            return ((1 - s) * 2 * Qh + mpmath.power(s, 1 + e) * N * Q1) / (2 + s * (N - 2))

        def fmp(s):
            return (mpmath.power(s, e + 1) * (e * Q1 * (N - 2))
                    + mpmath.power(s, e) * 2 * (e + 1) * Q1 - 2 * Qh)

        s0 = root_f(m)
        lo, hi = mpmath.mpf(s0) * (1 - mpmath.mpf(10) ** -8), mpmath.mpf(s0) * (1 + mpmath.mpf(10) ** -8)
        root = mpmath.findroot(fmp, (lo, hi), solver="anderson")
        return +min(Lmp(mpmath.mpf(0)), Lmp(root), Lmp(mpmath.mpf(1)))


def closed_form_bound(m: int) -> float:
    """Explicit weaker lower bound for Lambda*_{m,m-3} using c2 and c3."""
    _check_m(m)
    Qh, Q1, N = _L_parts(m)
    cc2, cc3 = c2(m), c3(m)
    if not 0.0 <= cc3 <= 1.0:
        raise Codim3Error(f"m={m}: c3={cc3} outside [0, 1]")
    num = (1.0 - cc3 * cc3) * 2.0 * Qh + cc3 ** (4.0 / m + 2.0) * N * Q1
    return num / (2.0 + cc2 * cc2 * (N - 2))


@dataclass(frozen=True)
class Codim3Report:
    m: int
    Q1: float
    Qhat0: float
    A0: float
    A1: float
    A2: float
    s_root: float
    c_star: float
    inf_L: float
    c2: float
    c3: float
    closed_form: float
    method: str
    rounding: dict = field(default_factory=dict)


def codim3_report(m: int) -> Codim3Report:
    """All intermediate quantities of the codimension-3 bound for one m."""
    _check_m(m)
    fp = f_poly(m)
    inf = infimum_L(m)
    Q1 = yamabe_sphere(m)
    return Codim3Report(
        m=m,
        Q1=Q1,
        Qhat0=qhat0(m),
        A0=fp.A0,
        A1=fp.A1,
        A2=fp.A2,
        s_root=root_f(m),
        c_star=inf.c_star,
        inf_L=inf.value,
        c2=c2(m),
        c3=c3(m),
        closed_form=closed_form_bound(m),
        method=inf.method,
        rounding={
            "Q_star_nearest0.1": round_nearest(Q1, lambda: yamabe_sphere_mp(m)),
            "L_floor0.1": round_down(inf.value, lambda: infimum_L_mp(m)),
        },
    )


class Table3Row(NamedTuple):
    m: int
    q_star: float
    L_bound: float
    q_star_raw: float
    L_raw: float


def table3(m_from: int = 7, m_to: int = 15) -> list[Table3Row]:
    """Rows (m, Q*(S^m) to nearest 0.1, inf L_m rounded down to 0.1)."""
    if not 7 <= m_from <= m_to <= 200:
        raise ValueError(f"need 7 <= m_from <= m_to <= 200, got {m_from}, {m_to}")
    rows = []
    for m in range(m_from, m_to + 1):
        q = yamabe_sphere(m)
        inf = infimum_L(m).value
        rows.append(Table3Row(
            m=m,
            q_star=round_nearest(q, lambda m=m: yamabe_sphere_mp(m)),
            L_bound=round_down(inf, lambda m=m: infimum_L_mp(m)),
            q_star_raw=q,
            L_raw=inf,
        ))
    return rows
