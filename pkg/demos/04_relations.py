"""The web of inequalities between the invariants, as a propagating graph.

Run with ``python3 demos/04_relations.py``.
"""

# %% Build and check
import time

from yamabe_thresholds.relations import (
    Family,
    NodeKey,
    build_paper_graph,
    check_consistency,
    parse_fact,
    seed_computed,
    seed_registry,
)

t0 = time.perf_counter()
report = check_consistency()
print(report.summary(), f"({time.perf_counter() - t0:.2f} s)")

# %% What propagation derives
g = build_paper_graph()
seed_registry(g)
seed_computed(g)
g.propagate()
for key in (NodeKey(Family.L_STAR, 7, 4), NodeKey(Family.LS_TILDE, 7, 4), NodeKey(Family.LS, 7, 4),
            NodeKey(Family.QS_TILDE, 7, 4, 0.5), NodeKey(Family.L_TILDE, 3, 2), NodeKey(Family.L, 3, 2)):
    node = g.nodes[key]
    print(f"{str(key):24s} [{node.lo.value:.4f}, {node.hi.value:.4f}]")
    print("   lower bound because:", " <- ".join(node.lo.reason.chain()))

# %% Edges waiting on a side condition
# The edge Q~spin <= Q*spin needs Q*spin < Q*(S^m), which no current upper
# bound certifies, so it stays unused.
print(len(g.inapplicable_runtime_edges()), "conditionally inapplicable edges")

# %% Injecting a false statement
for text in ("Lambda^spin(7,4) < 65.2", "Q~spin(7,4,0.5) < Q*(7,4,0.5)"):
    bad = check_consistency(extra_facts=[parse_fact(text)])
    print(f"\n{text}: {bad.summary()}")
    for line in bad.contradiction.trace:
        print("   ", line)
