import math

import pytest

from yamabe_thresholds.constants import yamabe_sphere
from yamabe_thresholds.relations import (
    CONDITIONS,
    BoundFact,
    ContradictionError,
    Family,
    InequalityGraph,
    NodeKey,
    RelationEdge,
    build_paper_graph,
    check_consistency,
    graph_from_json,
    graph_from_lines,
    parse_fact,
    seed_computed,
    seed_registry,
)

F = Family
C_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@pytest.fixture(scope="module")
def full_graph():
    g = build_paper_graph()
    seed_registry(g)
    seed_computed(g)
    return g.propagate()


# (m, k, c) -> k<=m-2, fn1, fn2, transcribed by hand from the printed conditions
TRUTH_Q = {
    (7, 4, 1.0): (True, False, True),     # 4 > 20 no; c = 1 and k <= m-3
    (7, 4, 0.5): (True, False, False),    # 4 > 5 no; 2 > 5 no
    (7, 4, 0.25): (True, True, True),     # 4 > 1.25; 2 > 1.25
    (7, 5, 0.0): (True, True, False),     # 1 > 0; 0 > 0 no
    (7, 5, 1.0): (True, False, False),    # 1 > 30 no; k = m-2 with c = 1
    (7, 6, 0.0): (False, False, False),   # 0 > 0 no
    (3, 0, 1.0): (True, True, True),      # 4 > 0; k = 0 <= m-3
    (15, 10, 0.5): (True, False, False),  # 16 > 27.5 no; 12 > 27.5 no
    (15, 10, 0.75): (True, False, False), # 16 > 61.9 no; 12 > 61.9 no
    (5, 2, 0.75): (True, True, False),    # 4 > 3.375; 2 > 3.375 no
}
# (m, k) -> "k<=m-4 or k=m-3<=3", alias (k<=m-4 or k=m-3<=6)
TRUTH_L = {
    (6, 3): (True, True),
    (7, 4): (False, True),
    (9, 6): (False, True),
    (10, 7): (False, False),
    (8, 4): (True, True),
    (5, 3): (False, False),
    (4, 1): (True, True),
}


@pytest.mark.parametrize("mkc,expected", TRUTH_Q.items())
def test_q_level_truth_table(mkc, expected):
    m, k, c = mkc
    got = tuple(CONDITIONS[n].holds(m, k, c) for n in ("k<=m-2", "fn1", "fn2"))
    assert got == expected


@pytest.mark.parametrize("mk,expected", TRUTH_L.items())
def test_lambda_level_truth_table(mk, expected):
    m, k = mk
    got = tuple(CONDITIONS[n].holds(m, k) for n in ("k<=m-4 or k=m-3<=3", "alias"))
    assert got == expected


def _reference(name, m, k, c):
    # exact rational arithmetic on the dyadic grid values
    num = {0.0: 0, 0.25: 1, 0.5: 2, 0.75: 3, 1.0: 4}.get(c)
    c2_16 = None if num is None else num * num  # 16 c^2
    if name == "always" or name == "injected":
        return True
    if name == "k<=m-2":
        return k <= m - 2
    if name == "fn1":
        return 16 * (m - k - 1) ** 2 > c2_16 * k * (k + 1)
    if name == "fn2":
        if c == 1.0:
            return k <= m - 3
        return 16 * (m - k - 1) * (m - k - 2) > c2_16 * k * (k + 1)
    if name == "k<=m-4 or k=m-3<=3":
        return k <= m - 4 or (k == m - 3 and k <= 3)
    if name == "alias":
        return k <= m - 4 or (k == m - 3 and k <= 6)
    raise KeyError(name)


def test_every_edge_precondition_enumerated(full_graph):
    checked = 0
    for edge in full_graph.edges:
        key = edge.src if edge.src.c is not None else edge.dst
        if key.m < 3:
            continue
        assert edge.statically_applicable() == _reference(edge.condition, key.m, key.k, key.c), edge
        checked += 1
    assert checked > 5000


def test_paper_graph_contents(full_graph):
    edges = {(e.src.family, e.dst.family, e.kind, e.condition) for e in full_graph.edges}
    assert (F.Q_STAR, F.Q_TILDE, "leq", "always") in edges
    assert (F.QS_TILDE, F.Q_STAR, "geq", "k<=m-2") in edges
    assert (F.QS_TILDE, F.QS_STAR, "leq", "fn1") in edges
    assert (F.Q_TILDE, F.Q_STAR, "leq", "fn2") in edges
    for m in range(3, 16):
        assert full_graph.interval(NodeKey(F.Q_TILDE, m, m - 2, 1.0)) == (math.inf, math.inf)
        assert full_graph.interval(NodeKey(F.Q_STAR, m, 1, 1.0)) == (yamabe_sphere(m), yamabe_sphere(m))
    lo, hi = full_graph.interval(NodeKey(F.LS_TILDE, 2, 1))
    assert lo == pytest.approx(8 * math.pi) and hi == pytest.approx(math.sqrt(3) * 8 * math.pi)


def test_k_mm2_function_of_c(full_graph):
    q1 = yamabe_sphere(6)
    assert full_graph.interval(NodeKey(F.Q_STAR, 6, 4, 0.5))[0] == pytest.approx(0.5 ** (1 / 3) * q1)
    assert full_graph.interval(NodeKey(F.L_STAR, 6, 4)) == (0.0, 0.0)


def test_assert_then_equality_consistent():
    g = InequalityGraph()
    key = NodeKey(F.Q_STAR, 7, 4, 1.0)
    g.assert_fact(BoundFact(key, "lower", 113.5, "table value"))
    g.assert_fact(BoundFact(key, "equal", yamabe_sphere(7), "c = 1 value"))
    g.propagate()
    assert g.interval(key) == (yamabe_sphere(7), yamabe_sphere(7))


def test_empty_interval_reports_both_citations():
    g = InequalityGraph()
    key = NodeKey(F.L_STAR, 6, 2)
    g.assert_fact(BoundFact(key, "lower", 5.0, "source A"))
    with pytest.raises(ContradictionError) as info:
        g.assert_fact(BoundFact(key, "upper", 3.0, "source B"))
    trace = "\n".join(info.value.trace)
    assert "source A" in trace and "source B" in trace
    assert info.value.node == key


def test_assert_idempotent():
    g = InequalityGraph()
    fact = BoundFact(NodeKey(F.Q_STAR, 6, 2), "lower", 1.0, "forall fact")
    g.add_domain([6])
    g.assert_fact(fact).assert_fact(fact)
    assert g.forall_facts == [fact]
    before = g.propagate().to_lines()
    g.assert_fact(BoundFact(NodeKey(F.Q_STAR, 6, 2, 0.5), "lower", 1.0, "forall fact"))
    assert g.propagate().to_lines() == before


def test_forall_fact_lifts_to_infimum():
    g = InequalityGraph().add_domain([6])
    g.assert_fact(BoundFact(NodeKey(F.Q_STAR, 6, 2), "lower", 10.0, "uniform bound")).propagate()
    assert g.interval(NodeKey(F.L_STAR, 6, 2))[0] == 10.0
    for c in C_GRID:
        assert g.interval(NodeKey(F.Q_STAR, 6, 2, c))[0] == 10.0


def test_pointwise_fact_does_not_lift():
    g = InequalityGraph().add_domain([6])
    g.assert_fact(BoundFact(NodeKey(F.Q_STAR, 6, 2, 0.5), "lower", 10.0, "one c")).propagate()
    assert g.interval(NodeKey(F.L_STAR, 6, 2))[0] == -math.inf


def test_lambda_bound_reaches_spin_tilde():
    g = InequalityGraph()
    g.assert_fact(BoundFact(NodeKey(F.L_STAR, 7, 4), "lower", 65.2, "codim-3 table"))
    g.add_domain([7])
    g.propagate()
    assert g.interval(NodeKey(F.LS_TILDE, 7, 4))[0] >= 65.2
    assert g.interval(NodeKey(F.LS, 7, 4))[0] >= 65.2
    # and pointwise through the infimum: Q~spin(c) >= Q*(c) >= Lambda*
    assert g.interval(NodeKey(F.QS_TILDE, 7, 4, 0.5))[0] >= 65.2


def test_empty_graph_fixpoint():
    g = InequalityGraph()
    assert g.propagate().nodes == {}


def test_hijazi_injection_contradicts():
    rep = check_consistency(extra_facts=[parse_fact("Q~spin(7,4,0.5) < Q*(7,4,0.5)")])
    assert not rep.consistent
    assert any("Hijazi" in line for line in rep.contradiction.trace)


def test_hijazi_injection_outside_precondition():
    g = InequalityGraph()
    a, b = NodeKey(F.QS_TILDE, 5, 4, 0.5), NodeKey(F.Q_STAR, 5, 4, 0.5)
    g.assert_relation(a, b, "leq", "caller", strict=True)
    g.propagate()  # k = m-1: the Hijazi edge does not apply


def test_full_graph_consistent():
    rep = check_consistency()
    assert rep.consistent, rep.summary()
    assert len(rep.intervals) > 3000
    assert all(lo <= hi for lo, hi in rep.intervals.values())


def test_table_value_injection_contradicts():
    rep = check_consistency(extra_facts=[parse_fact("Lambda^spin(7,4) < 65.2")])
    assert not rep.consistent
    assert "codimension-3" in "\n".join(rep.contradiction.trace)


def test_dimension_three_top_codimension():
    g = build_paper_graph([3]).propagate()
    assert g.interval(NodeKey(F.L_TILDE, 3, 2)) == (math.inf, math.inf)
    q = yamabe_sphere(3)
    assert g.interval(NodeKey(F.L, 3, 2)) == (q, q)


def test_infinity_absorbs_upper_endpoint():
    g = InequalityGraph()
    key = NodeKey(F.Q_TILDE, 5, 4, 0.5)
    g.assert_fact(BoundFact(key, "equal", math.inf, "infinite"))
    g.assert_fact(BoundFact(key, "lower", 12.0, "finite lower"))
    g.propagate()
    assert g.interval(key) == (math.inf, math.inf)


def test_runtime_condition_activates_when_certified():
    g = build_paper_graph([5])
    key = NodeKey(F.QS_STAR, 5, 1, 0.5)
    edge = next(e for e in g.edges if e.runtime and e.dst == key)
    assert edge.statically_applicable() and not g.edge_applicable(edge)
    g.assert_fact(BoundFact(key, "upper", 70.0, "hypothetical certificate")).propagate()
    assert g.edge_applicable(edge)
    assert g.interval(NodeKey(F.QS_TILDE, 5, 1, 0.5))[1] <= 70.0


def test_strict_cycle_trace():
    g = InequalityGraph()
    a, b = NodeKey(F.L_STAR, 6, 1), NodeKey(F.L_TILDE, 6, 1)
    g.assert_relation(b, a, "leq", "strict claim", strict=True)
    with pytest.raises(ContradictionError) as info:
        g.propagate()
    assert "strict claim" in "\n".join(info.value.trace)


def test_propagation_monotone_and_idempotent():
    g = build_paper_graph([6, 7])
    before = {k: n.interval for k, n in g.nodes.items()}
    g.propagate()
    for key, (lo, hi) in before.items():
        nlo, nhi = g.interval(key)
        assert nlo >= lo and nhi <= hi
    text = g.to_lines()
    assert g.propagate().to_lines() == text


def test_line_export_round_trip(full_graph):
    text = full_graph.to_lines()
    back = graph_from_lines(text)
    assert back.to_lines() == text
    assert {k: n.interval for k, n in back.nodes.items()} == \
        {k: n.interval for k, n in full_graph.nodes.items()}
    assert set(back.edges) == set(full_graph.edges)


def test_json_export_round_trip(full_graph):
    text = full_graph.to_json()
    assert graph_from_json(text).to_json() == text


def test_export_is_deterministic():
    a = build_paper_graph([5, 6]).propagate().to_lines()
    b = build_paper_graph([6, 5]).propagate().to_lines()
    assert a == b


def test_parse_fact_forms():
    f = parse_fact("Lambda^spin(7,4) < 65.2")
    assert f.node == NodeKey(F.LS, 7, 4) and f.direction == "upper" and f.strict
    f = parse_fact("Q*(7, 4) >= 10")
    assert f.node == NodeKey(F.Q_STAR, 7, 4, None) and not f.strict
    rel = parse_fact("Q~spin(7,4,0.5) < Q*(7,4,0.5)")
    assert rel == (NodeKey(F.QS_TILDE, 7, 4, 0.5), NodeKey(F.Q_STAR, 7, 4, 0.5), "leq", True)
    for bad in ("nonsense", "Foo(1,2) < 3", "Lambda*(7) < 1"):
        with pytest.raises((ValueError, IndexError)):
            parse_fact(bad)


def test_node_validation():
    g = InequalityGraph()
    with pytest.raises(ValueError):
        g.ensure_node(NodeKey(F.L_STAR, 5, 2, 0.5))
    with pytest.raises(ValueError):
        g.ensure_node(NodeKey(F.L_STAR, 5, 5))
    with pytest.raises(ValueError):
        RelationEdge(NodeKey(F.L_STAR, 5, 2), NodeKey(F.L, 5, 2), "lt", "always", "x")
    with pytest.raises(ValueError):
        BoundFact(NodeKey(F.L_STAR, 5, 2), "lower", 1.0, "a|b")
