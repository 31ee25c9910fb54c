from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.graph import level_from, slope_from
from artifact.potential import (
    PotentialError,
    admissible_extension,
    check_subintegral,
    heights_from_divisor,
    recover_level_function,
    subintegrability,
)

from conftest import graphs_with_levels, multigraphs

weights = st.one_of(st.none(), st.fractions(min_value=-5, max_value=3, max_denominator=3))


def has_positive_circuit(G, x) -> bool:
    """Bellman-Ford on negated weights: a positive circuit is a negative cycle."""
    D = nx.MultiDiGraph()
    D.add_nodes_from(G.vertices.elements)
    for a in G.arrows:
        if x[a] is not None:
            D.add_edge(G.tail(a), G.head(a), weight=-x[a])
    return nx.negative_edge_cycle(D, weight="weight")


@given(multigraphs(max_vertices=5, max_extra=5), st.data())
def test_subintegrability_against_bellman_ford(G, data):
    x = {a: data.draw(weights) for a in G.arrows}
    positive = has_positive_circuit(G, x)
    if positive:
        with pytest.raises(PotentialError):
            subintegrability(G, x)
        return
    h = subintegrability(G, x)
    assert min(h.values()) == 0
    assert check_subintegral(G, x, h) == []


@given(multigraphs(max_vertices=5, max_extra=5), st.data())
def test_tight_potentials_are_accepted(G, data):
    """Weights read off a potential minus slack: never positive, always solvable."""
    h = {v: data.draw(st.fractions(min_value=-4, max_value=4, max_denominator=3)) for v in G.vertices.elements}
    x = {a: h[G.tail(a)] - h[G.head(a)] - data.draw(st.sampled_from([0, 0, Fraction(1, 2), 2])) for a in G.arrows}
    pot = subintegrability(G, x)
    assert check_subintegral(G, x, pot) == []


@given(graphs_with_levels())
def test_divisor_roundtrip(data):
    G, ell, h, s, _ = data
    ext = admissible_extension(G, ell, h)
    assert ext.slopes == s
    back = heights_from_divisor(G, ell, ext)
    shift = h[G.vertices.elements[0]] - back[G.vertices.elements[0]]
    assert all(back[v] + shift == h[v] for v in h)
    for a, r in ext.divisor.interior:
        assert 0 < r < ell[a.edge]


@given(graphs_with_levels(max_vertices=5, max_extra=4))
def test_levels_recovered_from_lengths(data):
    G, ell, _, s, pi = data
    h = recover_level_function(G, ell, s, pi)
    assert slope_from(G, ell, h) == s and level_from(G, h) == pi


def test_lengths_outside_the_cone_name_a_circuit(k4):
    from artifact.verify import k4_pair

    pair = k4_pair(k4)
    ell = {e: Fraction(1) for e in k4.edge_ids}
    ell["e01"] = Fraction(3)
    with pytest.raises(PotentialError, match="circuit"):
        recover_level_function(k4, ell, pair.s, pair.pi)
