from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given

from artifact.fixtures import load_graph, load_json, names
from artifact.graph import (
    Arrow,
    GraphError,
    Multigraph,
    OrderedPartition,
    SlopeFunction,
    SlopeLevelPair,
    is_slope_level_pair,
    slope_sets,
    validate,
    zeta,
)

from conftest import graphs_with_levels, multigraphs


def nx_graph(G: Multigraph) -> nx.MultiGraph:
    H = nx.MultiGraph()
    H.add_nodes_from(G.vertices.elements)
    H.add_edges_from(G.ends[e] for e in G.edge_ids)
    return H


@given(multigraphs(max_vertices=6, max_extra=6))
def test_cycle_rank_and_components_match_networkx(G):
    H = nx_graph(G)
    assert G.is_connected() == nx.is_connected(H)
    assert G.cycle_rank == H.number_of_edges() - H.number_of_nodes() + nx.number_connected_components(H)


def test_fixtures_load_and_validate():
    assert set(names()) >= {"k4", "theta", "two_cycle", "figure1", "disconnected"}
    for name in ("k4", "theta", "two_cycle", "figure1"):
        G = load_graph(name)
        assert Multigraph.from_json(G.to_json()).to_json() == G.to_json()
        assert validate(G).connected
    assert validate(load_graph("k4")).genus == 3
    with pytest.raises(GraphError, match="graph not connected"):
        validate(load_graph("disconnected"))


def test_malformed_graphs_are_rejected():
    with pytest.raises(GraphError):
        Multigraph.from_json({"vertices": ["a"], "edges": [{"id": "e", "ends": ["a", "b"]}]})
    with pytest.raises(GraphError):
        Multigraph.from_json({"vertices": ["a"], "edges": [{"id": "e"}]})
    with pytest.raises(GraphError):
        Multigraph(["a", "b"], [("e", ("a", "b")), ("e", ("b", "a"))])
    with pytest.raises(GraphError):
        Multigraph(["a"], [], {"a": -1})


def test_arrow_orientation():
    G = Multigraph(["a", "b"], [("e", ("a", "b"))])
    a = Arrow.parse("e:+")
    assert (G.tail(a), G.head(a)) == ("a", "b")
    assert (G.tail(a.rev), G.head(a.rev)) == ("b", "a")
    assert a.rev.key == "e:-" and G.arrow("e:-") == a.rev


def test_slope_guards():
    G = Multigraph(["a", "b"], [("e", ("a", "b"))])
    with pytest.raises(GraphError):
        SlopeFunction(G, {Arrow("e", 1): 1, Arrow("e", -1): 0})
    with pytest.raises(GraphError):
        SlopeFunction.from_json(G, {"e:+": "1/2", "e:-": "-1"})
    s = SlopeFunction.from_json(G, {"e:+": 2, "e:-": -3})
    with pytest.raises(GraphError):
        SlopeLevelPair.from_json(G, {"slopes": s.to_json(), "partition": [["a", "b"]]})
    assert is_slope_level_pair(s, OrderedPartition.of([["b"], ["a"]], G))


def test_partition_guards():
    G = Multigraph(["a", "b"], [("e", ("a", "b"))])
    with pytest.raises(GraphError):
        OrderedPartition.of([["a"], ["a", "b"]], G)
    with pytest.raises(GraphError):
        OrderedPartition.of([["a"]], G)
    with pytest.raises(GraphError):
        OrderedPartition.of([["a"], [], ["b"]], G)


@given(graphs_with_levels())
def test_floor_slopes_give_slope_level_pairs(data):
    G, ell, h, s, pi = data
    assert is_slope_level_pair(s, pi)
    for a in G.arrows:
        d = (h[G.tail(a)] - h[G.head(a)]) / ell[a.edge]
        assert s[a] <= d < s[a] + 1
    ss = slope_sets(s)
    vertical_integer = set()
    for e in G.edge_ids:
        d = (h[G.ends[e][0]] - h[G.ends[e][1]]) / ell[e]
        if d != 0 and d.denominator == 1:
            vertical_integer.add(e)
    assert ss.integer_edges == vertical_integer


@given(graphs_with_levels())
def test_zeta_by_cut_edges(data):
    """Each edge crossing the cut contributes s(a) + [s(a) < 0] for its arrow a leaving I."""
    G, _, _, s, _ = data
    z = zeta(s)
    for I in G.vertices.subsets():
        want = 0
        for a in G.arrows:
            if G.tail_mask(a) & I and not G.head_mask(a) & I:
                want += s[a] + (1 if s[a] < 0 else 0)
        assert z[I] == want
    assert z[G.vertices.full] == 0


def test_pair_json_roundtrip(k4):
    obj = load_json("k4")
    assert Multigraph.from_json(obj).edge_ids == k4.edge_ids
    s = SlopeFunction.zero(k4)
    pair = SlopeLevelPair(s, OrderedPartition.trivial(k4))
    assert SlopeLevelPair.from_json(k4, pair.to_json()) == pair
    assert all(v == Fraction(0) for v in zeta(s).values)
