"""Adaptive Simpson quadrature for smooth one-dimensional integrands."""

from __future__ import annotations

from typing import Callable


class QuadratureError(RuntimeError):
    """Raised when the recursion budget is exhausted before the tolerance is met."""


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    abstol: float = 1e-12,
    reltol: float = 1e-13,
    min_depth: int = 5,
    max_depth: int = 50,
) -> float:
    """Integrate ``f`` over ``[a, b]``.

    A panel is accepted once its Richardson error estimate is below
    ``max(abstol, reltol * |panel|)`` scaled to the panel width, and never
    before ``min_depth`` levels of bisection (protects against an early
    false accept on integrands that vanish to high order at an endpoint).
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, abstol, reltol, min_depth, max_depth)

    fa, fb = f(a), f(b)
    c = 0.5 * (a + b)
    fc = f(c)
    whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb)
    width = b - a

    # explicit stack instead of recursion; entries are panels still to refine
    total = 0.0
    stack = [(a, b, fa, fc, fb, whole, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flm, frm = f(lmid), f(rmid)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        err = left + right - est
        share = (hi - lo) / width
        tol = max(abstol * share, reltol * abs(left + right))
        if depth >= min_depth and abs(err) <= 15.0 * tol:
            total += left + right + err / 15.0
            continue
        if depth >= max_depth:
            raise QuadratureError(
                f"adaptive Simpson did not converge on [{lo}, {hi}] (error estimate {err:.3e})"
            )
        stack.append((mid, hi, fmid, frm, fhi, right, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, depth + 1))
    return total
