"""Inequality graph between the Q- and Lambda-invariants of the model spaces.

Nodes are invariants of one family at fixed parameters: Q-level families at
(m, k, c) for c on a sampled grid, Lambda-level families at (m, k).  Each node
carries an interval [lo, hi] whose endpoints remember whether they are
strict and which chain of citations produced them.  Edges are conditional
inequalities; an edge is used only where its precondition holds.

Propagation is a worklist fixpoint.  Intervals only shrink, and moves
smaller than ``TOL`` are ignored, so it terminates.  After the fixpoint,
cycles of applicable edges that contain a strict edge are reported as
contradictions (a < ... <= a).

Lambda-level and Q-level nodes are linked only by the infimum relation
Lambda_X(m, k) <= Q_X(m, k, c) for every c, and by "for all c" facts, whose
lower bounds lift to the infimum.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional

import networkx as nx

from . import codim3
from .aggregate import LAMBDA_SPIN, LAMBDA_STAR, builtin_registry
from .constants import sphere_volume, yamabe_sphere
from .model_space import q_star_mm2

__all__ = [
    "Family",
    "NodeKey",
    "Reason",
    "Bound",
    "Node",
    "BoundFact",
    "Condition",
    "CONDITIONS",
    "RelationEdge",
    "ContradictionError",
    "ConsistencyReport",
    "InequalityGraph",
    "DEFAULT_C_GRID",
    "build_paper_graph",
    "seed_registry",
    "seed_computed",
    "check_consistency",
    "parse_fact",
    "graph_from_lines",
    "graph_from_json",
]

TOL = 1e-12
DEFAULT_C_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_DIMENSIONS = range(3, 16)


class Family(str, Enum):
    Q_STAR = "Q*"
    Q_TILDE = "Q~"
    QS_STAR = "Q*spin"
    QS_TILDE = "Q~spin"
    L_STAR = "Lambda*"
    L_TILDE = "Lambda~"
    L = "Lambda"
    LS_STAR = "Lambda^spin,*"
    LS_TILDE = "Lambda~^spin"
    LS = "Lambda^spin"

    @property
    def is_q(self) -> bool:
        return self in Q_FAMILIES


Q_FAMILIES = (Family.Q_STAR, Family.Q_TILDE, Family.QS_STAR, Family.QS_TILDE)
LAMBDA_FAMILIES = (Family.L_STAR, Family.L_TILDE, Family.L, Family.LS_STAR,
                   Family.LS_TILDE, Family.LS)
INFIMUM_OF = {
    Family.Q_STAR: Family.L_STAR,
    Family.Q_TILDE: Family.L_TILDE,
    Family.QS_STAR: Family.LS_STAR,
    Family.QS_TILDE: Family.LS_TILDE,
}
# renormalized squares of Dirac eigenvalues
_NONNEGATIVE = {Family.QS_STAR, Family.QS_TILDE, Family.LS_STAR, Family.LS_TILDE, Family.LS}


class NodeKey(NamedTuple):
    family: Family
    m: int
    k: int
    c: Optional[float] = None

    def __str__(self) -> str:
        if self.c is None:
            return f"{self.family.value}({self.m},{self.k})"
        return f"{self.family.value}({self.m},{self.k},{self.c!r})"

    def sort_key(self):
        return (self.family.value, self.m, self.k, -1.0 if self.c is None else self.c)

    def encode(self) -> str:
        parts = [self.family.value, str(self.m), str(self.k)]
        if self.c is not None:
            parts.append(repr(float(self.c)))
        return ":".join(parts)

    @classmethod
    def decode(cls, text: str) -> "NodeKey":
        parts = text.split(":")
        c = float(parts[3]) if len(parts) == 4 else None
        return cls(Family(parts[0]), int(parts[1]), int(parts[2]), c)


@dataclass(frozen=True)
class Reason:
    citation: str
    node: Optional[NodeKey] = None
    parent: Optional["Reason"] = None

    def chain(self) -> list[str]:
        out, r = [], self
        while r is not None:
            out.append(r.citation if r.node is None else f"{r.node}: {r.citation}")
            r = r.parent
        return out


@dataclass(frozen=True)
class Bound:
    value: float
    strict: bool
    reason: Reason


def _tighter_lo(new: Bound, old: Bound) -> bool:
    if new.value == old.value or (math.isfinite(new.value) and math.isfinite(old.value)
                                  and abs(new.value - old.value) <= TOL * max(1.0, abs(old.value))):
        return new.strict and not old.strict
    return new.value > old.value


def _tighter_hi(new: Bound, old: Bound) -> bool:
    if new.value == old.value or (math.isfinite(new.value) and math.isfinite(old.value)
                                  and abs(new.value - old.value) <= TOL * max(1.0, abs(old.value))):
        return new.strict and not old.strict
    return new.value < old.value


def _empty(lo: Bound, hi: Bound) -> bool:
    if lo.value == hi.value or (math.isfinite(lo.value) and math.isfinite(hi.value)
                                and abs(lo.value - hi.value) <= TOL * max(1.0, abs(hi.value))):
        return lo.strict or hi.strict
    return lo.value > hi.value


@dataclass
class Node:
    key: NodeKey
    lo: Bound
    hi: Bound

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lo.value, self.hi.value)


@dataclass(frozen=True)
class BoundFact:
    """A numeric bound on one node.  ``c=None`` on a Q-family node means for all c."""

    node: NodeKey
    direction: str  # "lower", "upper" or "equal"
    value: float
    citation: str
    strict: bool = False
    provenance: str = "stated"

    def __post_init__(self):
        if self.direction not in ("lower", "upper", "equal"):
            raise ValueError(f"bad direction {self.direction!r}")
        if self.strict and self.direction == "equal":
            raise ValueError("an equality cannot be strict")
        _check_text(self.citation)


def _check_text(text: str) -> None:
    if "|" in text or "\n" in text:
        raise ValueError(f"'|' and newlines are reserved: {text!r}")


def _exact(c):
    return Fraction(c) if c is not None else None


@dataclass(frozen=True)
class Condition:
    name: str
    text: str
    predicate: Callable[[int, int, Optional[Fraction]], bool]

    def holds(self, m: int, k: int, c: Optional[float] = None) -> bool:
        return self.predicate(m, k, _exact(c))


def _fn2(m, k, c):
    if c is None:
        return False
    if c == 1:
        return k <= m - 3
    return (m - k - 1) * (m - k - 2) > c * c * (k + 1) * k


CONDITIONS = {
    cond.name: cond
    for cond in (
        Condition("always", "always", lambda m, k, c: True),
        Condition("k<=m-2", "k <= m-2", lambda m, k, c: k <= m - 2),
        Condition("fn1", "(m-k-1)^2 > c^2 k(k+1)",
                  lambda m, k, c: c is not None and (m - k - 1) ** 2 > c * c * k * (k + 1)),
        Condition("fn2", "(m-k-1)(m-k-2) > c^2 k(k+1) with c < 1, or k <= m-3 with c = 1", _fn2),
        Condition("k<=m-4 or k=m-3<=3", "k <= m-4, or k = m-3 <= 3",
                  lambda m, k, c: k <= m - 4 or (k == m - 3 and k <= 3)),
        Condition("alias", "k <= m-4, or k = m-3 <= 6",
                  lambda m, k, c: k <= m - 4 or (k == m - 3 and k <= 6)),
        Condition("injected", "asserted by the caller", lambda m, k, c: True),
    )
}

# runtime side condition of the edge Q~spin <= Q*spin: Q*spin(M) < Q*spin(S^m)
RUNTIME_QS_BELOW_SPHERE = "Q*spin < Q*spin(S^m)"


@dataclass(frozen=True)
class RelationEdge:
    """``src kind dst`` where kind is "leq", "geq" or "equal"."""

    src: NodeKey
    dst: NodeKey
    kind: str
    condition: str
    citation: str
    strict: bool = False
    runtime: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("leq", "geq", "equal"):
            raise ValueError(f"bad relation kind {self.kind!r}")
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown precondition {self.condition!r}")
        _check_text(self.citation)

    def statically_applicable(self) -> bool:
        key = self.src if self.src.c is not None else self.dst
        return CONDITIONS[self.condition].holds(key.m, key.k, key.c)

    def sort_key(self):
        return (self.src.sort_key(), self.dst.sort_key(), self.kind, self.condition, self.citation)

    def orientations(self):
        """Pairs (smaller, larger) implied by the edge."""
        if self.kind == "leq":
            return [(self.src, self.dst)]
        if self.kind == "geq":
            return [(self.dst, self.src)]
        return [(self.src, self.dst), (self.dst, self.src)]


# edge templates between families at the same parameters
_Q_TEMPLATES = (
    (Family.Q_STAR, Family.Q_TILDE, "leq", "always", None,
     "Q* <= Q~ for all m, k (cut-off argument)"),
    (Family.QS_STAR, Family.QS_TILDE, "leq", "k<=m-2", None,
     "Q*spin <= Q~spin for k <= m-2 (L^{q*}-invertibility + cut-off)"),
    (Family.QS_TILDE, Family.Q_STAR, "geq", "k<=m-2", None,
     "Q~spin >= Q* for 0 <= k <= m-2 (conformal Hijazi inequality on model spaces)"),
    (Family.QS_TILDE, Family.QS_STAR, "leq", "fn1", RUNTIME_QS_BELOW_SPHERE,
     "Q~spin <= Q*spin for (m-k-1)^2 > c^2 k(k+1) and Q*spin < Q*spin(S^m)"),
    (Family.Q_TILDE, Family.Q_STAR, "leq", "fn2", None,
     "Q~ <= Q* for (m-k-1)(m-k-2) > c^2 k(k+1), c < 1, or k <= m-3, c = 1 (minimizers exist)"),
)
_L_TEMPLATES = (
    (Family.LS_STAR, Family.LS_TILDE, "leq", "k<=m-2", None,
     "Lambda^spin,* <= Lambda~^spin for k <= m-2"),
    (Family.LS_TILDE, Family.LS_STAR, "leq", "k<=m-2", None,
     "Lambda~^spin <= Lambda^spin,* for k <= m-2 (pointed convergence of S^{k+1} x S^{m-k-1})"),
    (Family.L_STAR, Family.L_TILDE, "leq", "always", None,
     "Lambda* <= Lambda~ for all m, k"),
    (Family.L_TILDE, Family.L_STAR, "leq", "k<=m-4 or k=m-3<=3", None,
     "Lambda~ <= Lambda* for k <= m-4 or k = m-3 <= 3"),
    (Family.LS_TILDE, Family.L_STAR, "geq", "k<=m-2", None,
     "Lambda~^spin >= Lambda* for k <= m-2 (conformal Hijazi, infimum over c)"),
    (Family.LS, Family.LS_TILDE, "equal", "k<=m-2", None,
     "Lambda^spin := Lambda~^spin for k <= m-2 (definition)"),
    (Family.L, Family.L_TILDE, "leq", "always", None,
     "Lambda = min{Lambda~, inf Q^(2)} <= Lambda~"),
    (Family.L, Family.L_TILDE, "equal", "alias", None,
     "Lambda = Lambda~ for k = m-3 <= 6 or k <= m-4"),
)
_INF_CITATION = "Lambda is the infimum over c in [0,1] of the Q-invariant"


class ContradictionError(Exception):
    """The accumulated bounds or strict relations cannot all hold."""

    def __init__(self, message: str, node: Optional[NodeKey] = None,
                 lo: Optional[Bound] = None, hi: Optional[Bound] = None,
                 trace: Iterable[str] = ()):
        super().__init__(message)
        self.node = node
        self.lo = lo
        self.hi = hi
        self.trace = list(trace)


def _contradiction(node: Node) -> ContradictionError:
    trace = ["lower bound chain:"] + ["  " + s for s in node.lo.reason.chain()]
    trace += ["upper bound chain:"] + ["  " + s for s in node.hi.reason.chain()]
    return ContradictionError(
        f"empty interval at {node.key}: lo={node.lo.value!r}{' (strict)' if node.lo.strict else ''}"
        f" > hi={node.hi.value!r}{' (strict)' if node.hi.strict else ''}",
        node=node.key, lo=node.lo, hi=node.hi, trace=trace,
    )


class InequalityGraph:
    """Mutable graph of invariant nodes, conditional edges and bound facts."""

    def __init__(self, c_grid: Iterable[float] = DEFAULT_C_GRID):
        self.c_grid = tuple(float(c) for c in c_grid)
        self.nodes: dict[NodeKey, Node] = {}
        self.edges: list[RelationEdge] = []
        self.forall_facts: list[BoundFact] = []
        self._incident: dict[NodeKey, list[int]] = {}
        self._edge_set: set = set()
        self._static: list[bool] = []
        self._by_group: dict[tuple, list[NodeKey]] = {}
        self._forall_index: dict[tuple, list[BoundFact]] = {}
        self._dirty: dict[NodeKey, None] = {}  # insertion-ordered worklist

    # -- construction ------------------------------------------------------

    def _default_node(self, key: NodeKey) -> Node:
        if key.family in _NONNEGATIVE:
            lo = Bound(0.0, False, Reason("renormalized square of a Dirac eigenvalue"))
        else:
            lo = Bound(-math.inf, False, Reason("no lower bound"))
        return Node(key, lo, Bound(math.inf, False, Reason("no upper bound")))

    def add_edge(self, edge: RelationEdge) -> None:
        ident = (edge.src, edge.dst, edge.kind, edge.condition, edge.strict, edge.citation)
        if ident in self._edge_set:
            return
        self._edge_set.add(ident)
        self.ensure_node(edge.src)
        self.ensure_node(edge.dst)
        self.edges.append(edge)
        self._static.append(edge.statically_applicable())
        idx = len(self.edges) - 1
        self._incident.setdefault(edge.src, []).append(idx)
        self._incident.setdefault(edge.dst, []).append(idx)
        self._dirty.update(dict.fromkeys((edge.src, edge.dst)))

    def ensure_node(self, key: NodeKey) -> Node:
        node = self.nodes.get(key)
        if node is not None:
            return node
        if key.family.is_q and key.c is None:
            raise ValueError(f"Q-level node needs a c value: {key}")
        if not key.family.is_q and key.c is not None:
            raise ValueError(f"Lambda-level node takes no c value: {key}")
        if not 0 <= key.k <= key.m - 1:
            raise ValueError(f"need 0 <= k <= m-1: {key}")
        # create the whole sibling group at these parameters, then its edges
        m, k, c = key.m, key.k, key.c
        families = Q_FAMILIES if key.family.is_q else LAMBDA_FAMILIES
        for fam in families:
            sib = NodeKey(fam, m, k, c)
            self.nodes[sib] = self._default_node(sib)
            self._incident.setdefault(sib, [])
            self._by_group.setdefault((fam, m, k), []).append(sib)
            self._dirty[sib] = None
        if key.family.is_q:
            for a, b, kind, cond, runtime, cite in _Q_TEMPLATES:
                self.add_edge(RelationEdge(NodeKey(a, m, k, c), NodeKey(b, m, k, c),
                                           kind, cond, cite, runtime=runtime))
            for fam in families:
                sib = NodeKey(fam, m, k, c)
                lam = NodeKey(INFIMUM_OF[fam], m, k)
                self.add_edge(RelationEdge(lam, sib, "leq", "always", _INF_CITATION))
                for fact in self._forall_index.get((fam, m, k), ()):
                    self._apply(sib, fact)
        else:
            for a, b, kind, cond, runtime, cite in _L_TEMPLATES:
                self.add_edge(RelationEdge(NodeKey(a, m, k), NodeKey(b, m, k), kind, cond, cite))
        return self.nodes[key]

    def add_domain(self, ms: Iterable[int]) -> "InequalityGraph":
        for m in ms:
            for k in range(m):
                for c in self.c_grid:
                    self.ensure_node(NodeKey(Family.Q_STAR, m, k, c))
                self.ensure_node(NodeKey(Family.L_STAR, m, k))
        return self

    # -- facts ---------------------------------------------------------------

    def _apply(self, key: NodeKey, fact: BoundFact) -> None:
        node = self.ensure_node(key)
        reason = Reason(fact.citation)
        if fact.direction in ("lower", "equal"):
            self._set_lo(node, Bound(fact.value, fact.strict, reason))
        if fact.direction in ("upper", "equal"):
            self._set_hi(node, Bound(fact.value, fact.strict, reason))

    def assert_fact(self, fact: BoundFact) -> "InequalityGraph":
        """Intersect a node's interval with a fact; raises on an empty interval."""
        key = fact.node
        if key.family.is_q and key.c is None:
            group = (key.family, key.m, key.k)
            if fact in self._forall_index.get(group, ()):
                return self
            self.forall_facts.append(fact)
            self._forall_index.setdefault(group, []).append(fact)
            for other in list(self._by_group.get(group, ())):
                self._apply(other, fact)
            if fact.direction in ("lower", "equal"):
                # a lower bound valid for every c bounds the infimum too
                lam = NodeKey(INFIMUM_OF[key.family], key.m, key.k)
                self._set_lo(self.ensure_node(lam), Bound(
                    fact.value, fact.strict, Reason(fact.citation + " (for all c)")))
            return self
        self._apply(key, fact)
        return self

    def assert_relation(self, src: NodeKey, dst: NodeKey, kind: str, citation: str,
                        strict: bool = False) -> "InequalityGraph":
        """Add a caller-supplied relation ``src kind dst`` (kind in leq/geq/equal)."""
        self.add_edge(RelationEdge(src, dst, kind, "injected", citation, strict=strict))
        return self

    def _set_lo(self, node: Node, b: Bound) -> bool:
        if not _tighter_lo(b, node.lo):
            return False
        node.lo = b
        self._dirty[node.key] = None
        if _empty(node.lo, node.hi):
            raise _contradiction(node)
        return True

    def _set_hi(self, node: Node, b: Bound) -> bool:
        if not _tighter_hi(b, node.hi):
            return False
        node.hi = b
        self._dirty[node.key] = None
        if _empty(node.lo, node.hi):
            raise _contradiction(node)
        return True

    # -- propagation ---------------------------------------------------------

    def edge_applicable(self, edge: RelationEdge, static: Optional[bool] = None) -> bool:
        if not (edge.statically_applicable() if static is None else static):
            return False
        if edge.runtime == RUNTIME_QS_BELOW_SPHERE:
            return self._qs_below_sphere(edge)
        return True

    def _qs_below_sphere(self, edge: RelationEdge) -> bool:
        key = edge.dst if edge.dst.family == Family.QS_STAR else edge.src
        hi = self.nodes[key].hi
        q1 = yamabe_sphere(key.m)
        return hi.value < q1 * (1 - TOL) or (hi.strict and hi.value <= q1 * (1 + TOL))

    def _push(self, small: NodeKey, large: NodeKey, edge: RelationEdge) -> None:
        a, b = self.nodes[small], self.nodes[large]
        strict = edge.strict
        self._set_hi(a, Bound(b.hi.value, b.hi.strict or strict,
                              Reason(edge.citation, large, b.hi.reason)))
        self._set_lo(b, Bound(a.lo.value, a.lo.strict or strict,
                              Reason(edge.citation, small, a.lo.reason)))

    def propagate(self, max_rounds: int = 1_000_000) -> "InequalityGraph":
        """Run interval propagation to a fixpoint, then check strict cycles."""
        rounds = 0
        while self._dirty:
            key = next(iter(self._dirty))
            del self._dirty[key]
            for idx in self._incident.get(key, ()):
                edge = self.edges[idx]
                if not self.edge_applicable(edge, self._static[idx]):
                    continue
                for small, large in edge.orientations():
                    self._push(small, large, edge)
            rounds += 1
            if rounds > max_rounds:
                raise RuntimeError("propagation did not reach a fixpoint")
        self._check_strict_cycles()
        return self

    def _check_strict_cycles(self) -> None:
        g = nx.DiGraph()
        for edge, static in zip(self.edges, self._static):
            if not self.edge_applicable(edge, static):
                continue
            for small, large in edge.orientations():
                prev = g.get_edge_data(small, large)
                if prev is None or (edge.strict and not prev["strict"]):
                    g.add_edge(small, large, strict=edge.strict, citation=edge.citation)
        for comp in nx.strongly_connected_components(g):
            if len(comp) < 2:
                continue
            for u, v, data in g.subgraph(comp).edges(data=True):
                if data["strict"]:
                    path = nx.shortest_path(g.subgraph(comp), v, u)
                    trace = [f"{u} < {v}: {data['citation']}"]
                    for a, b in zip(path, path[1:]):
                        trace.append(f"{a} <= {b}: {g[a][b]['citation']}")
                    raise ContradictionError(
                        f"strict cycle through {u} and {v}", node=u, trace=trace)

    # -- queries -------------------------------------------------------------

    def interval(self, key: NodeKey) -> tuple[float, float]:
        return self.nodes[key].interval

    def inapplicable_runtime_edges(self) -> list[RelationEdge]:
        return [e for e in self.edges
                if e.runtime is not None and e.statically_applicable()
                and not self.edge_applicable(e)]  # conditionally inapplicable

    def sorted_nodes(self) -> list[Node]:
        return [self.nodes[k] for k in sorted(self.nodes, key=NodeKey.sort_key)]

    def sorted_edges(self) -> list[RelationEdge]:
        return sorted(self.edges, key=RelationEdge.sort_key)

    # -- serialization -------------------------------------------------------

    def to_lines(self) -> str:
        out = ["# relation graph v1", "grid|" + ",".join(repr(c) for c in self.c_grid)]
        for n in self.sorted_nodes():
            out.append("|".join([
                "node", n.key.encode(),
                _num(n.lo.value), str(int(n.lo.strict)), _num(n.hi.value), str(int(n.hi.strict)),
                n.lo.reason.citation, n.hi.reason.citation,
            ]))
        for e in self.sorted_edges():
            out.append("|".join([
                "edge", e.src.encode(), e.dst.encode(), e.kind, str(int(e.strict)),
                e.condition, e.runtime or "-", e.citation,
            ]))
        for f in sorted(self.forall_facts, key=lambda f: (f.node.sort_key(), f.direction, f.citation)):
            out.append("|".join([
                "forall", f.node.encode(), f.direction, _num(f.value), str(int(f.strict)),
                f.provenance, f.citation,
            ]))
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        doc = {
            "c_grid": list(self.c_grid),
            "nodes": [
                {"key": n.key.encode(), "lo": _num(n.lo.value), "lo_strict": n.lo.strict,
                 "hi": _num(n.hi.value), "hi_strict": n.hi.strict,
                 "lo_citation": n.lo.reason.citation, "hi_citation": n.hi.reason.citation}
                for n in self.sorted_nodes()
            ],
            "edges": [
                {"src": e.src.encode(), "dst": e.dst.encode(), "kind": e.kind, "strict": e.strict,
                 "condition": e.condition, "runtime": e.runtime, "citation": e.citation}
                for e in self.sorted_edges()
            ],
            "forall": [
                {"node": f.node.encode(), "direction": f.direction, "value": _num(f.value),
                 "strict": f.strict, "provenance": f.provenance, "citation": f.citation}
                for f in sorted(self.forall_facts,
                                key=lambda f: (f.node.sort_key(), f.direction, f.citation))
            ],
        }
        return json.dumps(doc, indent=1) + "\n"


def _num(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def _restore(doc_grid, node_rows, edge_rows, forall_rows) -> InequalityGraph:
    g = InequalityGraph(doc_grid)
    # bypass template expansion: the serialized structure is authoritative
    for key, lo, los, hi, his, loc, hic in node_rows:
        g.nodes[key] = Node(key, Bound(lo, los, Reason(loc)), Bound(hi, his, Reason(hic)))
        g._incident.setdefault(key, [])
        g._by_group.setdefault((key.family, key.m, key.k), []).append(key)
    for e in edge_rows:
        ident = (e.src, e.dst, e.kind, e.condition, e.strict, e.citation)
        g._edge_set.add(ident)
        g.edges.append(e)
        g._static.append(e.statically_applicable())
        g._incident.setdefault(e.src, []).append(len(g.edges) - 1)
        g._incident.setdefault(e.dst, []).append(len(g.edges) - 1)
    for f in forall_rows:
        g.forall_facts.append(f)
        g._forall_index.setdefault((f.node.family, f.node.m, f.node.k), []).append(f)
    return g


def graph_from_lines(text: str) -> InequalityGraph:
    grid, nodes, edges, foralls = DEFAULT_C_GRID, [], [], []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        parts = line.split("|")
        tag = parts[0]
        if tag == "grid":
            grid = tuple(float(x) for x in parts[1].split(",")) if parts[1] else ()
        elif tag == "node":
            _, key, lo, los, hi, his, loc, hic = parts
            nodes.append((NodeKey.decode(key), float(lo), los == "1", float(hi), his == "1", loc, hic))
        elif tag == "edge":
            _, src, dst, kind, strict, cond, runtime, cite = parts
            edges.append(RelationEdge(NodeKey.decode(src), NodeKey.decode(dst), kind, cond, cite,
                                      strict=strict == "1", runtime=None if runtime == "-" else runtime))
        elif tag == "forall":
            _, key, direction, value, strict, prov, cite = parts
            foralls.append(BoundFact(NodeKey.decode(key), direction, float(value), cite,
                                     strict=strict == "1", provenance=prov))
        else:
            raise ValueError(f"unknown record {tag!r}")
    return _restore(grid, nodes, edges, foralls)


def graph_from_json(text: str) -> InequalityGraph:
    doc = json.loads(text)
    nodes = [(NodeKey.decode(n["key"]), float(n["lo"]), n["lo_strict"], float(n["hi"]),
              n["hi_strict"], n["lo_citation"], n["hi_citation"]) for n in doc["nodes"]]
    edges = [RelationEdge(NodeKey.decode(e["src"]), NodeKey.decode(e["dst"]), e["kind"],
                          e["condition"], e["citation"], strict=e["strict"], runtime=e["runtime"])
             for e in doc["edges"]]
    foralls = [BoundFact(NodeKey.decode(f["node"]), f["direction"], float(f["value"]),
                         f["citation"], strict=f["strict"], provenance=f["provenance"])
               for f in doc["forall"]]
    return _restore(tuple(doc["c_grid"]), nodes, edges, foralls)


# -- the published web of results -------------------------------------------

def paper_facts(ms: Iterable[int], c_grid: Iterable[float]) -> list[BoundFact]:
    """Special values stated for the model spaces, for the given dimensions."""
    F = Family
    facts: list[BoundFact] = []
    add = facts.append
    c_grid = tuple(c_grid)
    for m in ms:
        q1 = yamabe_sphere(m)
        for k in range(m):
            add(BoundFact(NodeKey(F.Q_STAR, m, k), "upper", q1,
                          "Q*(M) <= Q*(S^m) for every manifold"))
            add(BoundFact(NodeKey(F.QS_STAR, m, k), "upper", q1,
                          "Q*spin(M) <= Q*spin(S^m) = Q*(S^m)"))
            # c = 1: conformal to S^m minus S^k
            add(BoundFact(NodeKey(F.Q_STAR, m, k, 1.0), "equal", q1, "c=1: Q*(M_1) = Q*(S^m)"))
            add(BoundFact(NodeKey(F.QS_STAR, m, k, 1.0), "equal", q1, "c=1: Q*spin(M_1) = Q*(S^m)"))
            if k <= m - 2:
                add(BoundFact(NodeKey(F.QS_TILDE, m, k, 1.0), "equal", q1,
                              "c=1: Q~spin(M_1) = Q*(S^m) for k <= m-2"))
            else:
                add(BoundFact(NodeKey(F.QS_TILDE, m, k, 1.0), "equal", math.inf,
                              "c=1: Q~spin(H^m) = inf"))
            if k <= m - 3:
                add(BoundFact(NodeKey(F.Q_TILDE, m, k, 1.0), "equal", q1,
                              "c=1: Q~(M_1) = Q*(S^m) for k <= m-3"))
            else:
                add(BoundFact(NodeKey(F.Q_TILDE, m, k, 1.0), "equal", math.inf,
                              "c=1: Q~(M_1) = inf for k = m-2, m-1"))
            if k <= m - 3:
                for fam in (F.L_STAR, F.L_TILDE, F.L):
                    add(BoundFact(NodeKey(fam, m, k), "lower", 0.0,
                                  "positivity of the Lambda-invariants for k <= m-3", strict=True))
            if k <= m - 2:
                add(BoundFact(NodeKey(F.LS_TILDE, m, k), "lower", 0.0,
                              "Lambda~^spin > 0 for k <= m-2", strict=True))

        # k = m-2: Q*(M_c^{m,m-2}) = c^(2/m) Q*(S^m)
        for c in c_grid:
            add(BoundFact(NodeKey(F.Q_STAR, m, m - 2, c), "equal", q_star_mm2(m, c),
                          "k=m-2: Q*(M_c) = c^(2/m) Q*(S^m)"))
        add(BoundFact(NodeKey(F.L_STAR, m, m - 2), "equal", 0.0, "k=m-2: Lambda*_{m,m-2} = 0"))

        # k = m-1: two copies of H_c^m (R^m at c = 0)
        k = m - 1
        add(BoundFact(NodeKey(F.Q_STAR, m, k), "equal", q1, "k=m-1: Q*(M_c) = Q*(S^m)"))
        add(BoundFact(NodeKey(F.QS_STAR, m, k), "equal", q1, "k=m-1: Q*spin(M_c) = Q*(S^m)"))
        for c in c_grid:
            if c > 0:
                add(BoundFact(NodeKey(F.QS_TILDE, m, k, c), "equal", math.inf,
                              "k=m-1, c>0: Q~spin(H_c^m) = inf"))
                add(BoundFact(NodeKey(F.Q_TILDE, m, k, c), "equal", math.inf,
                              "k=m-1, c>0: Q~(H_c^m) = inf"))
            else:
                add(BoundFact(NodeKey(F.QS_TILDE, m, k, c), "equal", q1,
                              "Q~spin(R^m) = Q*(S^m) for m >= 3"))
                add(BoundFact(NodeKey(F.Q_TILDE, m, k, c), "equal", math.inf if m <= 4 else q1,
                              "Q~(R^m) = inf for m = 3, 4 and Q*(S^m) for m >= 5"))
        add(BoundFact(NodeKey(F.L_STAR, m, k), "equal", q1, "Lambda*_{m,m-1} = Q*(S^m)"))
        add(BoundFact(NodeKey(F.LS_STAR, m, k), "equal", q1, "Lambda^spin,*_{m,m-1} = Q*(S^m)"))
        add(BoundFact(NodeKey(F.LS_TILDE, m, k), "equal", q1, "Lambda~^spin_{m,m-1} = Q*(S^m)"))
        add(BoundFact(NodeKey(F.LS, m, k), "equal", q1, "Lambda^spin_{m,m-1} = Q*(S^m)"))
        add(BoundFact(NodeKey(F.L, m, k), "equal", q1, "Lambda_{m,m-1} = Q*(S^m)"))
        add(BoundFact(NodeKey(F.L_TILDE, m, k), "equal", math.inf if m <= 4 else q1,
                      "Lambda~_{m,m-1} = inf for m = 3, 4 and Q*(S^m) for m >= 5"))
    return facts


def surface_facts() -> list[BoundFact]:
    """m = 2, k = 1: Q*(S^2) = Lambda^spin_{2,1} <= Lambda~^spin_{2,1} <= 3^(1/2) Q*(S^2)."""
    q2 = 2.0 * sphere_volume(2)
    key = NodeKey(Family.LS_TILDE, 2, 1)
    return [
        BoundFact(key, "lower", q2, "Lambda~^spin_{2,1} = Q~spin(R^2) >= Q*(S^2)"),
        BoundFact(key, "upper", math.sqrt(3.0) * q2, "Lambda~^spin_{2,1} <= 3^(1/2) Q*(S^2)"),
        BoundFact(NodeKey(Family.LS, 2, 1), "equal", q2, "Lambda^spin_{2,1} = Q*(S^2)"),
    ]


def build_paper_graph(ms: Iterable[int] = DEFAULT_DIMENSIONS,
                      c_grid: Iterable[float] = DEFAULT_C_GRID,
                      surface: bool = True) -> InequalityGraph:
    """All edges and special-value facts for dimensions ``ms`` on the c-grid.

    ``surface`` adds the Lambda-level m = 2 facts, which have no Q-level domain.
    """
    ms = list(ms)
    if any(m < 3 for m in ms):
        raise ValueError("Q-level domain needs m >= 3")
    g = InequalityGraph(c_grid)
    g.add_domain(ms)
    facts = paper_facts(ms, g.c_grid) + (surface_facts() if surface else [])
    for fact in facts:
        g.assert_fact(fact)
    return g


def seed_registry(g: InequalityGraph, registry=None) -> InequalityGraph:
    """Assert the registry's Lambda* and Lambda^spin entries that fall inside the graph."""
    ms = {key.m for key in g.nodes}
    if registry is None:
        registry = builtin_registry(max(ms) if ms else 15)
    family = {LAMBDA_STAR: Family.L_STAR, LAMBDA_SPIN: Family.LS}
    for e in registry:
        if e.invariant not in family or e.k is None or e.value is None or e.m not in ms:
            continue
        g.assert_fact(BoundFact(NodeKey(family[e.invariant], e.m, e.k), e.direction, e.value,
                                e.citation, provenance=e.provenance))
    return g


def seed_computed(g: InequalityGraph) -> InequalityGraph:
    """Pointwise codimension-3 bounds Q*(M_c^{m,m-3}) >= L_m(c^2) for m >= 6."""
    ms = sorted({key.m for key in g.nodes if key.m >= 6})
    for m in ms:
        for c in g.c_grid:
            g.assert_fact(BoundFact(NodeKey(Family.Q_STAR, m, m - 3, c), "lower",
                                    codim3.L(m, c * c), "codimension-3 bound L_m(c^2)",
                                    provenance="computed"))
    return g


@dataclass
class ConsistencyReport:
    consistent: bool
    intervals: dict = field(default_factory=dict)
    contradiction: Optional[ContradictionError] = None
    inapplicable: list = field(default_factory=list)

    def summary(self) -> str:
        if self.consistent:
            return (f"consistent: {len(self.intervals)} nodes at fixpoint, "
                    f"{len(self.inapplicable)} conditionally-inapplicable edges")
        return "contradiction: " + str(self.contradiction)


def check_consistency(graph: Optional[InequalityGraph] = None, extra_facts: Iterable = (),
                      registry=None) -> ConsistencyReport:
    """Seed the paper graph with the registry and computed facts, inject extras, propagate.

    ``extra_facts`` holds :class:`BoundFact` objects or ``(src, dst, kind, strict)``
    relation tuples.
    """
    try:
        if graph is None:
            graph = build_paper_graph()
            seed_registry(graph, registry)
            seed_computed(graph)
        for extra in extra_facts:
            if isinstance(extra, BoundFact):
                graph.assert_fact(extra)
            else:
                src, dst, kind, strict = extra
                graph.assert_relation(src, dst, kind, "injected relation", strict=strict)
        graph.propagate()
    except ContradictionError as exc:
        return ConsistencyReport(False, contradiction=exc)
    intervals = {n.key: n.interval for n in graph.sorted_nodes()}
    return ConsistencyReport(True, intervals, None, graph.inapplicable_runtime_edges())


_NODE_RE = re.compile(r"^\s*(?P<fam>[^()\s]+)\((?P<args>[^)]*)\)\s*$")
_FACT_RE = re.compile(r"^(?P<lhs>.+?)\s*(?P<op><=|>=|<|>|=)\s*(?P<rhs>.+)$")


def _parse_node(text: str) -> NodeKey:
    mt = _NODE_RE.match(text)
    if not mt:
        raise ValueError(f"cannot parse node {text!r}; expected FAMILY(m,k[,c])")
    fam = Family(mt["fam"])
    args = [a.strip() for a in mt["args"].split(",")]
    if fam.is_q and len(args) == 2:
        return NodeKey(fam, int(args[0]), int(args[1]), None)
    c = float(args[2]) if len(args) == 3 else None
    return NodeKey(fam, int(args[0]), int(args[1]), c)


def parse_fact(text: str):
    """Parse ``"Lambda^spin(7,4) < 65.2"`` or ``"Q~spin(7,4,0.5) < Q*(7,4,0.5)"``.

    Returns a :class:`BoundFact` or a relation tuple ``(src, dst, kind, strict)``.
    """
    mt = _FACT_RE.match(text.strip())
    if not mt:
        raise ValueError(f"cannot parse fact {text!r}")
    lhs, op, rhs = _parse_node(mt["lhs"]), mt["op"], mt["rhs"].strip()
    try:
        value = float(rhs)
    except ValueError:
        other = _parse_node(rhs)
        kind = {"<": "leq", "<=": "leq", ">": "geq", ">=": "geq", "=": "equal"}[op]
        return (lhs, other, kind, op in ("<", ">"))
    direction = {"<": "upper", "<=": "upper", ">": "lower", ">=": "lower", "=": "equal"}[op]
    return BoundFact(lhs, direction, value, f"injected: {text.strip()}", strict=op in ("<", ">"),
                     provenance="injected")
