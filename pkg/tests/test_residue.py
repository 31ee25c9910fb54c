from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given

from artifact.fixtures import load_graph
from artifact.graph import GraphError, Multigraph, OrderedPartition, SlopeFunction, arrows_within, slope_sets, zeta
from artifact.rational import rank
from artifact.residue import (
    eta,
    eta_hat,
    eta_simple_by_residues,
    gamma,
    residue_conditions,
    residue_space,
)
from artifact.setfn import is_nondecreasing, is_simple, is_submodular

from conftest import graphs_with_levels, multigraphs


def flow_basis(G: Multigraph) -> list[list[Fraction]]:
    """Fundamental cycles of a spanning tree, as antisymmetric arrow vectors."""
    H = nx.MultiGraph()
    H.add_nodes_from(G.vertices.elements)
    for e in G.edge_ids:
        H.add_edge(*G.ends[e], key=e)
    tree = nx.minimum_spanning_tree(H)
    tree_keys = {k for _, _, k in tree.edges(keys=True)}
    pos = G.arrow_pos
    basis = []
    for e in G.edge_ids:
        if e in tree_keys:
            continue
        x, y = G.ends[e]
        vec = [Fraction(0)] * len(G.arrows)
        vec[pos[G.arrow(e + ":+")]] += 1
        vec[pos[G.arrow(e + ":-")]] -= 1
        path = nx.shortest_path(tree, y, x)
        for u, w in zip(path, path[1:]):
            f = next(k for k in tree[u][w])
            sign = 1 if G.ends[f] == (u, w) else -1
            vec[pos[G.arrow(f + ":+")]] += sign
            vec[pos[G.arrow(f + ":-")]] -= sign
        basis.append(vec)
    return basis


@given(multigraphs(max_vertices=6, max_extra=6))
def test_one_level_residues_are_cycle_flows(G):
    space = residue_space(G, OrderedPartition.trivial(G))
    flows = flow_basis(G)
    assert space.dim == len(flows) == G.cycle_rank
    assert rank(space.basis + flows) == space.dim
    g = gamma(G, OrderedPartition.trivial(G))
    tails = [G.tail_mask(a) for a in G.arrows]
    for I in G.vertices.subsets():
        cols = [j for j, t in enumerate(tails) if t & I]
        want = rank([[row[j] for j in cols] for row in flows]) if cols and flows else 0
        assert g[I] == want


@given(graphs_with_levels(max_vertices=6, max_extra=6))
def test_dimension_is_cycle_rank(data):
    G, _, _, _, pi = data
    space = residue_space(G, pi)
    assert space.dim == G.cycle_rank
    rows, counts = residue_conditions(G, pi)
    assert sum(counts.values()) == len(rows)
    for b in space.basis:
        assert all(sum(r * x for r, x in zip(row, b)) == 0 for row in rows)


@given(graphs_with_levels(max_vertices=5, max_extra=5))
def test_gamma_is_a_polymatroid(data):
    G, _, _, _, pi = data
    g = gamma(G, pi)
    assert is_submodular(g) and is_nondecreasing(g)
    assert g.range == G.cycle_rank


@given(graphs_with_levels(max_vertices=5, max_extra=5, genus=True))
def test_eta_is_gamma_plus_genus_plus_zeta(data):
    G, _, _, s, pi = data
    g, z, et = gamma(G, pi), zeta(s), eta(G, pi, s)
    a_int = slope_sets(s).integer_upward
    for I in G.vertices.subsets():
        assert et[I] == g[I] + G.genus_sum(I) + z[I]
        assert eta_hat(G, pi, s)[I] == et[I] + arrows_within(G, a_int, I)
    assert et.range == G.total_genus


@given(graphs_with_levels(max_vertices=5, max_extra=5))
def test_simpleness_read_from_residues(data):
    G, _, _, s, pi = data
    assert eta_simple_by_residues(G, pi, s) == is_simple(eta(G, pi, s))


def test_guards(k4):
    with pytest.raises(GraphError):
        eta(k4, OrderedPartition.of([["u0"], ["u1", "u2", "u3"]], k4), SlopeFunction.zero(k4))
    G = load_graph("disconnected")
    with pytest.raises(GraphError, match="not connected"):
        residue_space(G, OrderedPartition.trivial(G))
