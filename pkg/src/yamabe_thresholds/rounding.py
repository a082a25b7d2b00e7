"""Table rounding rules with a high-precision guard near rounding boundaries.

Two rules are used by the published tables: round to the nearest multiple
of 0.1 (half away from zero) and round down to a multiple of 0.1.  A binary64
value that lands within ``GUARD_WIDTH`` of a boundary of the active rule is
recomputed by the caller-supplied ``refine`` callable (typically an mpmath
evaluation) before the digit is fixed.
"""

from __future__ import annotations

import math
from decimal import ROUND_FLOOR, ROUND_HALF_UP, Decimal
from typing import Callable, Optional

__all__ = [
    "GUARD_WIDTH",
    "NEAREST",
    "FLOOR",
    "NONE",
    "round_nearest",
    "round_down",
    "apply_rounding",
    "near_boundary",
    "format_tenths",
]

GUARD_WIDTH = 5e-4
NEAREST = "nearest0.1"
FLOOR = "floor0.1"
NONE = "none"

_TENTH = Decimal("0.1")
Refine = Optional[Callable[[], object]]


def _to_decimal(x) -> Decimal:
    # repr() is the shortest string that round-trips; exact binary expansion
    # would turn a literal 91.8 into 91.79999... and floor it to 91.7.
    if isinstance(x, float):
        return Decimal(repr(x))
    return Decimal(str(x))


def near_boundary(x: float, rule: str) -> bool:
    """True when ``x`` is within the guard width of a boundary of ``rule``."""
    scaled = x * 10.0
    if rule == FLOOR:
        gap = scaled - math.floor(scaled)
        dist = min(gap, 1.0 - gap) / 10.0
    elif rule == NEAREST:
        gap = scaled - math.floor(scaled)
        dist = abs(gap - 0.5) / 10.0
    else:
        raise ValueError(f"unknown rounding rule {rule!r}")
    return dist < GUARD_WIDTH


def _settle(x: float, rule: str, refine: Refine):
    if refine is not None and near_boundary(x, rule):
        return refine()
    return x


def round_nearest(x: float, refine: Refine = None) -> float:
    """Nearest multiple of 0.1, ties away from zero."""
    if not math.isfinite(x):
        return x
    d = _to_decimal(_settle(x, NEAREST, refine))
    return float(d.quantize(_TENTH, rounding=ROUND_HALF_UP))


def round_down(x: float, refine: Refine = None) -> float:
    """Largest multiple of 0.1 not exceeding ``x``."""
    if not math.isfinite(x):
        return x
    d = _to_decimal(_settle(x, FLOOR, refine))
    return float(d.quantize(_TENTH, rounding=ROUND_FLOOR))


def apply_rounding(x: float, rule: str, refine: Refine = None) -> float:
    if rule == NEAREST:
        return round_nearest(x, refine)
    if rule == FLOOR:
        return round_down(x, refine)
    if rule == NONE:
        return x
    raise ValueError(f"unknown rounding rule {rule!r}")


def format_tenths(x: float) -> str:
    """Render a value already rounded to tenths with exactly one decimal."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.1f}"
