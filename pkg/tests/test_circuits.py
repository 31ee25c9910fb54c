"""Elementary circuits against networkx's cycle enumeration."""

from collections import Counter

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.circuits import CircuitOverflow, elementary_circuits


@st.composite
def digraphs(draw):
    n = draw(st.integers(1, 6))
    arrows = []
    for k in range(draw(st.integers(0, 12))):
        arrows.append((f"t{k}", draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))))
    return list(range(n)), arrows


def canonical(cycle):
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


@given(digraphs())
def test_circuits_match_networkx(g):
    verts, arrows = g
    found = elementary_circuits(verts, arrows)
    tail = {t: x for t, x, _ in arrows}
    head = {t: y for t, _, y in arrows}
    for c in found:
        assert all(head[c[i]] == tail[c[(i + 1) % len(c)]] for i in range(len(c)))
        assert len({tail[t] for t in c}) == len(c)
    assert len(set(map(canonical, (list(c) for c in found)))) == len(found)

    D = nx.DiGraph()
    D.add_nodes_from(verts)
    D.add_edges_from((x, y) for _, x, y in arrows)
    mult = Counter((x, y) for _, x, y in arrows)
    expected = 0
    vertex_cycles = set()
    for cyc in nx.simple_cycles(D):
        vertex_cycles.add(canonical(cyc))
        k = 1
        for i in range(len(cyc)):
            k *= mult[(cyc[i], cyc[(i + 1) % len(cyc)])]
        expected += k
    assert len(found) == expected
    assert {canonical([tail[t] for t in c]) for c in found} == vertex_cycles


def test_opposite_arrows_and_loops():
    out = elementary_circuits(["a", "b"], [("x", "a", "b"), ("y", "b", "a"), ("l", "a", "a")])
    assert sorted(map(sorted, out)) == [["l"], ["x", "y"]]


def test_cap():
    arrows = [(f"{i}{j}", i, j) for i in range(5) for j in range(5) if i != j]
    with pytest.raises(CircuitOverflow):
        elementary_circuits(list(range(5)), arrows, cap=10)
