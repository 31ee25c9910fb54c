"""Permissible slope-level pairs, per-brick fans and the canonical fan.

A slope-level pair is permissible when eta is positive and simple and its
open cone meets the positive orthant. Enumeration is exact: positivity of
eta on each union of lower levels bounds the total downward slope across the
cut above it, and every vertical edge crosses such a cut, so only finitely
many slope functions survive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator, Sequence

from . import lp
from .bricks import Brick, BrickError, contains_brick, enumerate_bricks
from .cones import ConeH, cone_hrep, integer_graph_genus, interior_membership, strict_point
from .graph import (
    Arrow,
    GraphError,
    Multigraph,
    OrderedPartition,
    SlopeFunction,
    SlopeLevelPair,
    edge_lengths,
)
from .rational import fmt, rank
from .residue import eta, gamma
from .setfn import PolytopeH, SetFunction, is_simple, polytope_hrep, upmin


class FanError(RuntimeError):
    """A fan axiom failed to certify; this signals a bug, never bad input."""


@dataclass
class PermissiblePair:
    pair: SlopeLevelPair
    eta: SetFunction
    chi: SetFunction
    cone: ConeH
    dim: int
    bricks: list[str] = field(default_factory=list)

    @property
    def polytope(self) -> PolytopeH:
        return polytope_hrep(self.chi)

    def to_json(self) -> dict:
        return {
            "pair": self.pair.to_json(),
            "eta": self.eta.to_json()["values"],
            "dim": self.dim,
            "bricks": list(self.bricks),
        }


def ordered_partitions(items: Sequence[str]) -> Iterator[list[list[str]]]:
    """All ordered set partitions (lowest block first), in a fixed order."""
    items = list(items)
    if not items:
        yield []
        return
    n = len(items)
    # assign each item a level, keep assignments whose used levels are 0..k-1
    for k in range(1, n + 1):
        for levels in product(range(k), repeat=n):
            if len(set(levels)) == k:
                yield [[x for x, l in zip(items, levels) if l == i] for i in range(k)]


def _slope_candidates(G: Multigraph, pi: OrderedPartition, gam: SetFunction,
                      slope_bound: int | None) -> Iterator[SlopeFunction]:
    lvl = pi.level
    # the upward arrow of each vertical edge
    ups: list[Arrow] = []
    for e in G.edge_ids:
        a = Arrow(e, 1)
        x, y = G.tail(a), G.head(a)
        if lvl[x] == lvl[y]:
            continue
        ups.append(a if lvl[x] > lvl[y] else a.rev)
    # cuts: J = levels < c, I = levels >= c; edges crossing with their budgets
    cuts = []
    for c in range(1, pi.depth):
        J = G.vertices.mask(v for v in G.vertices.elements if lvl[v] < c)
        crossing = [i for i, a in enumerate(ups) if lvl[G.tail(a)] >= c > lvl[G.head(a)]]
        budget = int(gam[J]) + G.genus_sum(J) + len(crossing) - 1
        cuts.append((crossing, budget))
    # each edge i gets a downward slope -t_i with t_i >= 1; order edges and prune
    m = len(ups)
    last_cut_edge = {}
    for ci, (crossing, _) in enumerate(cuts):
        last_cut_edge[ci] = max(crossing) if crossing else -1
    t = [0] * m

    def options(i):
        # the tightest budget over cuts containing edge i, minus already spent
        best = None
        for crossing, budget in cuts:
            if i in crossing:
                spent = sum(t[j] for j in crossing if j < i)
                rest = sum(1 for j in crossing if j > i)
                room = budget - spent - rest
                best = room if best is None else min(best, room)
        return best if best is not None else 0

    def rec(i):
        if i == m:
            yield list(t)
            return
        hi = options(i)
        if slope_bound is not None:
            hi = min(hi, slope_bound)
        for v in range(1, hi + 1):
            t[i] = v
            yield from rec(i + 1)
        t[i] = 0

    for ts in rec(0):
        # t = -s(down); up slope is t (integer) or t - 1 (noninteger)
        for integral in product((True, False), repeat=m):
            vals = {a: 0 for a in G.arrows}
            ok = True
            for a, ti, integ in zip(ups, ts, integral):
                up = ti if integ else ti - 1
                if up < 0:
                    ok = False
                    break
                vals[a] = up
                vals[a.rev] = -ti
            if ok:
                yield SlopeFunction(G, vals)


def enumerate_psl(G: Multigraph, slope_bound: int | None = None, with_bricks: bool = True) -> list[PermissiblePair]:
    """All permissible slope-level pairs of a connected graph of positive genus."""
    G.require_connected()
    g = G.total_genus
    if g < 1:
        raise GraphError("permissible pairs need total genus at least 1")
    out: list[PermissiblePair] = []
    for blocks in ordered_partitions(G.vertices.elements):
        pi = OrderedPartition.of(blocks, G)
        gam = gamma(G, pi)
        for s in _slope_candidates(G, pi, gam, slope_bound):
            et = eta(G, pi, s, gam)
            if any(v <= 0 for v in et.values[1:]) or not is_simple(et):
                continue
            cone = cone_hrep(G, s, pi)
            if strict_point(cone) is None:
                continue
            dim = len(G.edge_ids) - integer_graph_genus(G, s, pi)
            out.append(PermissiblePair(SlopeLevelPair(s, pi), et, upmin(et), cone, dim))
    if with_bricks:
        bricks = enumerate_bricks(G.vertices, g)
        for p in out:
            p.bricks = [B.key for B in bricks if contains_brick(p.chi, B)]
    return out


def psl_for_brick(psl: Sequence[PermissiblePair], B: Brick) -> list[PermissiblePair]:
    return [p for p in psl if contains_brick(p.chi, B)]


def _vec(G: Multigraph, ell) -> list[Fraction]:
    e = edge_lengths(G, ell)
    return [e[x] for x in G.edge_ids]


def pairs_at(G: Multigraph, ell, psl: Sequence[PermissiblePair]) -> list[PermissiblePair]:
    vec = _vec(G, ell)
    return [p for p in psl if interior_membership(p.cone, vec)]


# fan certification --------------------------------------------------------------

def _intersection(c1: ConeH, c2: ConeH) -> ConeH:
    return ConeH(c1.edges, c1.ineqs + c2.ineqs, c1.eqs + c2.eqs, None, c1.extra_eqs + c2.extra_eqs)


def is_face(F: ConeH, C: ConeH) -> bool:
    """Is F (contained in C) a face of C?

    Collect the inequalities of C (sign rows included) that vanish on all of
    F; F is a face exactly when C with those made equalities lies inside F.
    """
    tight = C.tight_rows(F)
    face = ConeH(C.edges, list(C.ineqs), list(C.eqs), None, list(C.extra_eqs) + [(r, None) for r in tight])
    return face.contained_in(F)


def certify_common_faces(cones: Sequence[ConeH]) -> list[tuple[int, int]]:
    """Check pairwise intersections are faces of both; return incidences (i, j) with cone i inside cone j."""
    cones = [c.reduced() for c in cones]
    incid = []
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            X = _intersection(cones[i], cones[j])
            for a, b in ((i, j), (j, i)):
                # the face of cone a cut out by X, checked only against the rows of cone b
                C = cones[a]
                face = ConeH(C.edges, C.ineqs, C.eqs, None, C.extra_eqs + [(r, None) for r in C.tight_rows(X)])
                if not face.contained_in(cones[b]):
                    raise FanError(f"cones {i} and {j} meet outside a common face")
            if cones[i].contained_in(cones[j]):
                incid.append((i, j))
            elif cones[j].contained_in(cones[i]):
                incid.append((j, i))
    return incid


@dataclass
class Fan:
    cones: list[ConeH]
    members: list[list[PermissiblePair]]  # pairs whose open cones meet in each cell
    dims: list[int]
    incidence: list[tuple[int, int]]
    brick: str | None = None

    def maximal(self) -> list[int]:
        top = max(self.dims) if self.dims else 0
        return [i for i, d in enumerate(self.dims) if d == top]

    def to_json(self) -> dict:
        G_edges = self.cones[0].edges if self.cones else ()
        return {
            "support": "nonnegative orthant",
            "brick": self.brick,
            "cones": [
                {
                    "pairs": [p.pair.to_json() for p in mem],
                    "hrep": cone.to_json(),
                    "dim": d,
                    "bricks": sorted({b for p in mem for b in p.bricks}),
                }
                for cone, mem, d in zip(self.cones, self.members, self.dims)
            ],
            "incidence": [list(x) for x in self.incidence],
            "edges": list(G_edges),
        }


def fan_for_brick(G: Multigraph, B: Brick, psl: Sequence[PermissiblePair], certify: bool = True) -> Fan:
    """Cones of the pairs whose polytope contains B."""
    if not B.full_dimensional:
        raise BrickError("fans are indexed by full-dimensional bricks")
    members = psl_for_brick(psl, B)
    cones = [p.cone for p in members]
    incid = certify_common_faces(cones) if certify else []
    return Fan(cones, [[p] for p in members], [p.dim for p in members], incid, B.key)


def _primitive(row: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in row:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _combine(cones: Sequence[ConeH]) -> ConeH:
    """Intersection with positive multiples of the same row listed once."""
    ineqs, eqs, seen_i, seen_e = [], [], set(), set()
    for C in cones:
        for r, z in C.ineqs:
            k = _primitive(r)
            if k not in seen_i:
                seen_i.add(k)
                ineqs.append((r, z))
        for r, z in C.eqs + C.extra_eqs:
            k = _primitive(r)
            if k not in seen_e and tuple(-x for x in k) not in seen_e:
                seen_e.add(k)
                eqs.append((r, z))
    return ConeH(cones[0].edges, ineqs, eqs)


def canonical_fan(G: Multigraph, psl: Sequence[PermissiblePair], bricks: Sequence[Brick] | None = None,
                  certify: bool = True) -> Fan:
    """Cells of the meet: one PSL(B) pair per brick, with intersecting open cones.

    Bricks sharing the same set of pairs contribute the same fan, so each
    distinct fan is refined in once. A cell is kept when the open cones of its
    pairs share a point; that point lies in the relative interior, so the cell
    dimension is the number of edges minus the rank of its equalities. The
    meet of fans with common support is a fan, so ``certify`` checks the
    common-face axiom inside each distinct per-brick fan.
    """
    if bricks is None:
        bricks = enumerate_bricks(G.vertices, G.total_genus)
    fans: dict[tuple[int, ...], list[PermissiblePair]] = {}
    for B in bricks:
        ps = psl_for_brick(psl, B)
        if not ps:
            raise FanError(f"brick {B.key} has no permissible pair")
        fans.setdefault(tuple(sorted(id(p) for p in ps)), ps)
    groups = sorted(fans.values(), key=len)
    if certify:
        for ps in groups:
            certify_common_faces([p.cone for p in ps])
    cells: list[tuple[ConeH, list[PermissiblePair]]] = []

    def rec(k: int, chosen: list[PermissiblePair], cone: ConeH | None):
        if k == len(groups):
            cells.append((cone, sorted(chosen, key=lambda p: str(p.pair.key()))))
            return
        options = groups[k]
        forced = [p for p in options if any(p is c for c in chosen)]
        if forced:
            rec(k + 1, chosen, cone)
            return
        for p in options:
            nxt = p.cone if cone is None else _combine([cone, p.cone])
            if strict_point(nxt) is not None:
                rec(k + 1, chosen + [p], nxt)

    rec(0, [], None)
    m = len(G.edge_ids)
    cones = [c for c, _ in cells]
    dims = [m - rank([list(r) for r, _ in c.eqs + c.extra_eqs]) for c in cones]
    return Fan(cones, [mem for _, mem in cells], dims, [], None)
