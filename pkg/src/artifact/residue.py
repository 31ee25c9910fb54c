"""Residue spaces of level graphs and the set functions built from them.

The residue space of a graph with an ordered partition is the subspace of
Q^arrows cut out by four families of linear conditions:

* vanishing on every downward arrow;
* for every vertex, the values on arrows leaving it sum to zero;
* opposite arrows of a horizontal edge carry opposite values;
* for every level n and every connected component X of the subgraph induced
  on the levels below n, the values on upward arrows from level n into X sum
  to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import (
    Arrow,
    GraphError,
    Multigraph,
    OrderedPartition,
    SlopeFunction,
    SlopeLevelPair,
    arrows_within,
    is_slope_level_pair,
    slope_sets,
    zeta,
)
from .rational import Matrix, fmt, nullspace, rank, rref
from .setfn import SetFunction, proper_bipartitions


@dataclass
class ResidueSpace:
    graph: Multigraph
    partition: OrderedPartition
    basis: Matrix  # rows in reduced row-echelon form, columns = graph.arrows
    row_counts: dict[str, int]
    _gamma: SetFunction | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, psi) -> bool:
        return rank(self.basis + [list(psi)]) == self.dim

    def to_json(self) -> dict:
        keys = [a.key for a in self.graph.arrows]
        return {
            "partition": self.partition.to_json(self.graph),
            "dim": self.dim,
            "basis": [{k: fmt(x) for k, x in zip(keys, row)} for row in self.basis],
            "row_counts": dict(self.row_counts),
        }


def residue_conditions(G: Multigraph, pi: OrderedPartition) -> tuple[Matrix, dict[str, int]]:
    """The stacked linear conditions; the residue space is their kernel."""
    arrows = G.arrows
    pos = G.arrow_pos
    m = len(arrows)
    rows: Matrix = []
    counts = {"R1": 0, "R2": 0, "R3": 0, "R4": 0}

    def unit(*idx_coeff):
        r = [Fraction(0)] * m
        for i, c in idx_coeff:
            r[i] += c
        return r

    lvl = pi.level
    for a in arrows:
        if lvl[G.tail(a)] < lvl[G.head(a)]:
            rows.append(unit((pos[a], 1)))
            counts["R1"] += 1
    for v in G.vertices.elements:
        out = [(pos[a], 1) for a in arrows if G.tail(a) == v]
        if out:
            rows.append(unit(*out))
            counts["R2"] += 1
    for e in G.edge_ids:
        x, y = G.ends[e]
        if lvl[x] == lvl[y]:
            rows.append(unit((pos[Arrow(e, 1)], 1), (pos[Arrow(e, -1)], 1)))
            counts["R3"] += 1
    for n in range(1, pi.depth):
        below = [v for v in G.vertices.elements if lvl[v] < n]
        for comp in G.components(below):
            terms = [(pos[a], 1) for a in arrows if lvl[G.tail(a)] == n and G.head(a) in comp]
            if terms:
                rows.append(unit(*terms))
                counts["R4"] += 1
    return rows, counts


def residue_space(G: Multigraph, pi: OrderedPartition) -> ResidueSpace:
    G.require_connected()
    if set(pi.level) != set(G.vertices.elements):
        raise GraphError("partition does not cover the vertex set exactly")
    rows, counts = residue_conditions(G, pi)
    ker = nullspace(rows, len(G.arrows))
    basis, _ = rref(ker, len(G.arrows)) if ker else ([], [])
    return ResidueSpace(G, pi, basis, counts)


def gamma_of(space: ResidueSpace) -> SetFunction:
    """gamma(I) = dimension of the projection onto arrows with tail in I."""
    if space._gamma is not None:
        return space._gamma
    G = space.graph
    tails = [G.tail_mask(a) for a in G.arrows]

    def value(I: int) -> int:
        cols = [j for j, t in enumerate(tails) if t & I]
        if not cols or not space.basis:
            return 0
        return rank([[row[j] for j in cols] for row in space.basis])

    space._gamma = SetFunction.from_callable(G.vertices, value)
    return space._gamma


def gamma(G: Multigraph, pi: OrderedPartition) -> SetFunction:
    return gamma_of(residue_space(G, pi))


def _require_pair(s: SlopeFunction, pi: OrderedPartition) -> None:
    if not is_slope_level_pair(s, pi):
        raise GraphError("slope function and partition disagree on upward arrows")


def integer_inside(s: SlopeFunction) -> SetFunction:
    """I -> number of integer upward arrows with both ends in I."""
    G = s.graph
    a_int = slope_sets(s).integer_upward
    return SetFunction.from_callable(G.vertices, lambda I: arrows_within(G, a_int, I))


def eta(G: Multigraph, pi: OrderedPartition, s: SlopeFunction, gam: SetFunction | None = None) -> SetFunction:
    """gamma + vertex genus + zeta_s."""
    _require_pair(s, pi)
    if gam is None:
        gam = gamma(G, pi)
    return gam + G.genus_setfn() + zeta(s)


def eta_hat(G: Multigraph, pi: OrderedPartition, s: SlopeFunction, gam: SetFunction | None = None) -> SetFunction:
    """eta plus the count of integer upward arrows inside I."""
    return eta(G, pi, s, gam) + integer_inside(s)


def eta_pair(pair: SlopeLevelPair, gam: SetFunction | None = None) -> SetFunction:
    return eta(pair.graph, pair.pi, pair.s, gam)


def eta_simple_by_residues(G: Multigraph, pi: OrderedPartition, s: SlopeFunction,
                           gam: SetFunction | None = None) -> bool:
    """Simpleness of eta read off gamma and the integer vertical edges.

    Every bipartition must either have gamma(I) + gamma(I^c) above the cycle
    rank or be crossed by an integer vertical edge.
    """
    _require_pair(s, pi)
    if gam is None:
        gam = gamma(G, pi)
    e_int = slope_sets(s).integer_edges
    vi = G.vindex
    for I, J in proper_bipartitions(G.vertices):
        if gam[I] + gam[J] > G.cycle_rank:
            continue
        crossing = False
        for e in e_int:
            x, y = G.ends[e]
            if bool(I >> vi(x) & 1) != bool(I >> vi(y) & 1):
                crossing = True
                break
        if not crossing:
            return False
    return True
