"""Registry of known bounds and the aggregate constants built from it.

Entries are either recomputed here (``computed``), copied from the published
tables (``paper-literal``) or imported from companion results whose formulas
are not reproduced (``external-citation``).  ``None`` stands for an unknown
value throughout; it is a legitimate answer, not an error.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Literal, Optional

from . import codim3
from .constants import yamabe_sphere

__all__ = [
    "LAMBDA_STAR",
    "LAMBDA_SPIN",
    "LAMBDA_SPIN_M",
    "HP2_PRODUCT",
    "HP2",
    "PUBLISHED_LAMBDA_SPIN_M",
    "PUBLISHED_HP2_PRODUCT",
    "CONJECTURES",
    "BoundRegistryEntry",
    "SigmaBoundExpression",
    "builtin_registry",
    "lambda_aliases",
    "best_lower_bound",
    "lambda_spin_m",
    "sigma_spin_lower",
    "registry_to_lines",
    "registry_from_lines",
    "registry_to_json",
    "registry_from_json",
]

LAMBDA_STAR = "Lambda*"
LAMBDA_SPIN = "Lambda^spin"
LAMBDA_SPIN_M = "Lambda^spin_m"
LAMBDA_SPIN_1 = "Lambda^spin_{m,1}"
LAMBDA_SPIN_MM2 = "Lambda^spin_{m,m-2}"
HP2_PRODUCT = "Q*(HP2xR^{m-8})"
HP2 = "Q*(HP2)"

LAMBDA_SPIN_M_CITATION = "published lower bounds for Lambda^spin_m, rounded down"
PUBLISHED_LAMBDA_SPIN_M = {
    5: 45.1, 6: 50.0, 7: 65.2, 8: 78.7, 9: 91.8,
    10: 104.9, 11: 118.1, 12: 131.5, 13: 145.0,
}
PUBLISHED_HP2_PRODUCT = {8: 121.4, 9: 138.5, 10: 97.3, 11: 135.9, 12: 158.7, 13: 178.0}
HP2_VALUE = 121.4967

CONJECTURES = (
    "Lambda^spin_{m,m-2} < Lambda^spin_m (indicated by numerics, unproven)",
    "Lambda^spin_m <= Q*(HP2xR^{m-8}) for all m >= 11 (conjectured)",
)

Direction = Literal["lower", "upper", "equal"]
Provenance = Literal["computed", "paper-literal", "external-citation"]
_DIRECTIONS = ("lower", "upper", "equal")
_PROVENANCES = ("computed", "paper-literal", "external-citation")


@dataclass(frozen=True)
class BoundRegistryEntry:
    invariant: str
    m: int
    k: Optional[int]
    value: Optional[float]
    direction: Direction
    provenance: Provenance
    citation: str

    def __post_init__(self):
        if self.direction not in _DIRECTIONS:
            raise ValueError(f"bad direction {self.direction!r}")
        if self.provenance not in _PROVENANCES:
            raise ValueError(f"bad provenance {self.provenance!r}")
        for text in (self.invariant, self.citation):
            if "|" in text or "\n" in text:
                raise ValueError(f"'|' and newlines are reserved: {text!r}")
        if self.provenance != "computed" and not self.citation:
            raise ValueError("non-computed entries need a citation")


def builtin_registry(max_m: int = 15) -> list[BoundRegistryEntry]:
    """All bounds known to the package for dimensions up to ``max_m``."""
    out: list[BoundRegistryEntry] = []
    add = out.append

    for m in range(3, max_m + 1):
        q1 = yamabe_sphere(m)
        add(BoundRegistryEntry(LAMBDA_STAR, m, m - 1, q1, "equal", "computed",
                               "k=m-1: Lambda*_{m,m-1} = Q*(S^m)"))
        add(BoundRegistryEntry(LAMBDA_SPIN, m, m - 1, q1, "equal", "computed",
                               "k=m-1: Lambda^spin_{m,m-1} = Q*(S^m)"))
        add(BoundRegistryEntry(LAMBDA_STAR, m, m - 2, 0.0, "equal", "computed",
                               "k=m-2: Q*(M_c) = c^(2/m) Q*(S^m), infimum 0"))
    add(BoundRegistryEntry(LAMBDA_STAR, 3, 0, yamabe_sphere(3), "equal", "computed",
                           "Lambda*_{3,0} = Q*(S^3) = 6 2^(2/3) pi^(4/3)"))
    for m in range(6, max_m + 1):
        add(BoundRegistryEntry(LAMBDA_STAR, m, m - 3, codim3.infimum_L(m).value, "lower",
                               "computed", "codimension-3 bound: inf over c of L_m(c^2)"))

    add(BoundRegistryEntry(LAMBDA_STAR, 4, 1, 38.9, "lower", "external-citation",
                           "Lambda*_{4,1} > 38.9 (companion result, strict)"))
    add(BoundRegistryEntry(LAMBDA_STAR, 5, 2, 45.1, "lower", "external-citation",
                           "Lambda*_{5,2} > 45.1 (companion result, strict)"))

    for m, v in PUBLISHED_LAMBDA_SPIN_M.items():
        if m > max_m:
            continue
        add(BoundRegistryEntry(LAMBDA_SPIN_M, m, None, v, "lower", "paper-literal", LAMBDA_SPIN_M_CITATION))
        # the row bounds a minimum over k, so it bounds every k <= m-4 term;
        # those terms come from companion results that are not recomputed
        for k in range(2, m - 3):
            add(BoundRegistryEntry(LAMBDA_SPIN, m, k, v, "lower", "paper-literal",
                                   LAMBDA_SPIN_M_CITATION + ", term k <= m-4"))
    for m, v in PUBLISHED_HP2_PRODUCT.items():
        if m > max_m:
            continue
        add(BoundRegistryEntry(HP2_PRODUCT, m, None, v, "lower", "paper-literal",
                               "published lower bounds for Q*(HP2xR^{m-8}), rounded down"))
    add(BoundRegistryEntry(HP2, 8, None, HP2_VALUE, "equal", "paper-literal",
                           "Q*(HP2) = 121.4967, attained by the canonical metric"))
    return out


def lambda_aliases(m: int, k: int) -> bool:
    """Whether Lambda_{m,k} coincides with Lambda~_{m,k} (k = m-3 <= 6 or k <= m-4)."""
    return k <= m - 4 or (k == m - 3 and k <= 6)


def _lower_values(registry: Iterable[BoundRegistryEntry], invariant: str, m: int, k):
    for e in registry:
        if e.invariant == invariant and e.m == m and e.k == k and e.value is not None:
            if e.direction in ("lower", "equal"):
                yield e.value


def best_lower_bound(m: int, k: int, registry) -> Optional[float]:
    """Best known lower bound for Lambda^spin_{m,k}, k <= m-2.

    Lambda^spin_{m,k} >= Lambda*_{m,k} for k <= m-2, so bounds for either
    invariant count.
    """
    if not 0 <= k <= m - 2:
        raise ValueError(f"need 0 <= k <= m-2, got k={k}, m={m}")
    values = list(_lower_values(registry, LAMBDA_SPIN, m, k))
    values += _lower_values(registry, LAMBDA_STAR, m, k)
    return max(values) if values else None


def lambda_spin_m(m: int, registry=None) -> Optional[float]:
    """Lower bound for Lambda^spin_m = min over k = 2..m-3 of Lambda^spin_{m,k}.

    Returns None when some term has no known bound.
    """
    if m < 5:
        raise ValueError(f"Lambda^spin_m is defined for m >= 5, got {m}")
    if registry is None:
        registry = builtin_registry(max(m, 15))
    terms = [best_lower_bound(m, k, registry) for k in range(2, m - 2)]
    if any(t is None for t in terms):
        return None
    return min(terms)


@dataclass(frozen=True)
class SigmaBoundExpression:
    """min{...} lower bound for the spinorial invariant of a closed spin manifold."""

    m: int
    variant: str
    terms: tuple  # of (label, value-or-None)
    combinator: str = "min"

    def __post_init__(self):
        if not self.terms:
            raise ValueError("expression needs at least one term")

    @property
    def evaluable(self) -> bool:
        return all(v is not None for _, v in self.terms)

    @property
    def value(self) -> Optional[float]:
        return min(v for _, v in self.terms) if self.evaluable else None

    def render(self) -> str:
        parts = [f"{label}={'unknown' if v is None else f'{v:.1f}'}" for label, v in self.terms]
        body = ", ".join(parts)
        tail = "" if self.value is None else f" = {self.value:.1f}"
        return f"min{{{body}}}{tail}"


def sigma_spin_lower(m: int, variant: str = "simply-connected", registry=None) -> SigmaBoundExpression:
    """Case analysis of the lower bound for the spinorial invariant in dimension m.

    ``variant`` is ``"simply-connected"`` or ``"fundamental-group"``; the
    latter adds Lambda^spin_{m,m-2}, for which no explicit value is known.
    """
    if m < 5:
        raise ValueError(f"need m >= 5, got {m}")
    if variant not in ("simply-connected", "fundamental-group"):
        raise ValueError(f"unknown variant {variant!r}")
    if registry is None:
        registry = builtin_registry(max(m, 15))

    spin_m = lambda_spin_m(m, registry)
    if spin_m is None:
        spin_m = next(_lower_values(registry, LAMBDA_SPIN_M, m, None), None)
    hp2 = next(_lower_values(registry, HP2_PRODUCT, m, None), None)

    terms = []
    if m in (9, 10):
        terms.append((LAMBDA_SPIN_1, None))
    terms.append((LAMBDA_SPIN_M, spin_m))
    if variant == "fundamental-group":
        terms.append((LAMBDA_SPIN_MM2, None))
    if m >= 8:
        terms.append((HP2_PRODUCT, hp2))
    return SigmaBoundExpression(m=m, variant=variant, terms=tuple(terms))


# -- serialization ---------------------------------------------------------

_FIELDS = ("invariant", "m", "k", "direction", "value", "provenance", "citation")


def _value_text(v: Optional[float]) -> str:
    if v is None:
        return "unknown"
    if math.isinf(v):
        return "inf"
    return repr(float(v))


def _value_parse(text: str) -> Optional[float]:
    if text == "unknown":
        return None
    return float(text)


def registry_to_lines(registry) -> str:
    """One entry per line: invariant|m|k|direction|value|provenance|citation."""
    lines = ["|".join(_FIELDS)]
    for e in registry:
        lines.append("|".join([
            e.invariant, str(e.m), "-" if e.k is None else str(e.k), e.direction,
            _value_text(e.value), e.provenance, e.citation,
        ]))
    return "\n".join(lines) + "\n"


def registry_from_lines(text: str) -> list[BoundRegistryEntry]:
    out = []
    for line in text.splitlines():
        if not line or line.startswith("#") or line == "|".join(_FIELDS):
            continue
        inv, m, k, direction, value, prov, cite = line.split("|")
        out.append(BoundRegistryEntry(inv, int(m), None if k == "-" else int(k),
                                      _value_parse(value), direction, prov, cite))
    return out


def registry_to_json(registry) -> str:
    rows = []
    for e in registry:
        d = asdict(e)
        d["value"] = _value_text(e.value) if e.value is None or math.isinf(e.value) else e.value
        rows.append(d)
    return json.dumps(rows, indent=1, sort_keys=True) + "\n"


def registry_from_json(text: str) -> list[BoundRegistryEntry]:
    out = []
    for d in json.loads(text):
        v = d["value"]
        if isinstance(v, str):
            v = _value_parse(v)
        out.append(BoundRegistryEntry(d["invariant"], d["m"], d["k"], v, d["direction"],
                                      d["provenance"], d["citation"]))
    return out
