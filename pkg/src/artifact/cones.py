"""Slope-level cones in the space of edge lengths.

The cone of a slope-level pair (s, pi) is cut out by one inequality per
circuit of the ghost graph: the sum of length times slope along the circuit
is nonpositive, with equality forced for circuits made of integer edges. The
ghost graph has one vertex per level, keeps the vertical edges, and adds a
ghost edge of length one between every two levels. Its upward ghost arrow
has slope 0 and its downward ghost arrow has slope minus infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from . import lp
from .circuits import DEFAULT_CAP, elementary_circuits
from .graph import (
    Arrow,
    GraphError,
    Multigraph,
    OrderedPartition,
    SlopeFunction,
    SlopeLevelPair,
    edge_lengths,
    is_slope_level_pair,
    slope_sets,
)
from .rational import fmt, rank


class ConeError(ValueError):
    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class Ghost(NamedTuple):
    tail: int  # level index
    head: int

    @property
    def key(self) -> str:
        return f"ghost:{self.tail}>{self.head}"

    @property
    def upward(self) -> bool:
        return self.tail > self.head

    def __str__(self) -> str:
        return self.key


Token = Union[Arrow, Ghost]
Circuit = tuple  # tuple of tokens, head to tail


def token_key(t: Token) -> str:
    return t.key


def circuit_keys(z: Circuit) -> list[str]:
    return [token_key(t) for t in z]


class GhostGraph:
    """The level graph with ghost edges, for a fixed slope-level pair."""

    def __init__(self, G: Multigraph, s: SlopeFunction, pi: OrderedPartition):
        self.G, self.s, self.pi = G, s, pi
        lvl = pi.level
        self.vertical = [a for a in G.arrows if lvl[G.tail(a)] != lvl[G.head(a)]]
        k = pi.depth
        self.ghosts = [Ghost(i, j) for i in range(k) for j in range(k) if i != j]

    def arrow_tokens(self) -> list[Token]:
        return list(self.vertical) + list(self.ghosts)

    def tail_level(self, t: Token) -> int:
        return t.tail if isinstance(t, Ghost) else self.pi.level[self.G.tail(t)]

    def head_level(self, t: Token) -> int:
        return t.head if isinstance(t, Ghost) else self.pi.level[self.G.head(t)]

    def arrow_triples(self) -> list[tuple[Token, int, int]]:
        return [(t, self.tail_level(t), self.head_level(t)) for t in self.arrow_tokens()]

    def slope(self, t: Token) -> int | None:
        """Slope of a token; None stands for minus infinity."""
        if isinstance(t, Ghost):
            return 0 if t.upward else None
        return self.s[t]

    def weight(self, t: Token, ell: Mapping[str, Fraction]) -> Fraction | None:
        if isinstance(t, Ghost):
            return Fraction(0) if t.upward else None
        return ell[t.edge] * self.s[t]

    def circuits(self, cap: int = DEFAULT_CAP) -> list[Circuit]:
        return elementary_circuits(list(range(self.pi.depth)), self.arrow_triples(), cap)

    # circuit classification -------------------------------------------------
    def is_essential(self, z: Circuit) -> bool:
        ghosts = [t for t in z if isinstance(t, Ghost)]
        if any(not g.upward for g in ghosts):
            return False
        if any(not isinstance(t, Ghost) and self.s[t] == 0 for t in z):
            return False
        for g1 in ghosts:
            for g2 in ghosts:
                if g1 != g2 and g1.tail > g2.tail >= g1.head > g2.head:
                    return False
        return True

    def is_integer_circuit(self, z: Circuit) -> bool:
        return all(not isinstance(t, Ghost) and self.s.is_integer(t) for t in z)

    def row(self, z: Circuit) -> tuple[Fraction, ...]:
        """Coefficients of sum over z of length times slope, per edge."""
        pos = self.G.edge_pos
        r = [Fraction(0)] * len(self.G.edge_ids)
        for t in z:
            if isinstance(t, Ghost):
                if not t.upward:
                    raise ConeError("a circuit through a downward ghost has no finite row")
                continue
            r[pos[t.edge]] += self.s[t]
        return tuple(r)

    def covered(self, z: Circuit) -> dict[Arrow, set[Ghost]]:
        """Vertical arrows xy with u >= x and y >= v for some ghost uv of z."""
        out: dict[Arrow, set[Ghost]] = {}
        for g in z:
            if not isinstance(g, Ghost):
                continue
            for a in self.vertical:
                if g.tail >= self.tail_level(a) and self.head_level(a) >= g.head:
                    out.setdefault(a, set()).add(g)
        return out


def ghost_graph(G: Multigraph, s: SlopeFunction, pi: OrderedPartition) -> GhostGraph:
    if not is_slope_level_pair(s, pi):
        raise GraphError("slope function and partition disagree on upward arrows")
    return GhostGraph(G, s, pi)


def essential_circuits(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, cap: int = DEFAULT_CAP) -> list[Circuit]:
    gg = ghost_graph(G, s, pi)
    return [z for z in gg.circuits(cap) if gg.is_essential(z)]


# H-representations ----------------------------------------------------------------------

@dataclass
class ConeH:
    """{l >= 0 : row.l <= 0 for ineqs, row.l = 0 for eqs}, rows tagged by circuits."""

    edges: tuple[str, ...]
    ineqs: list[tuple[tuple[Fraction, ...], Circuit]]
    eqs: list[tuple[tuple[Fraction, ...], Circuit]]
    pair: SlopeLevelPair | None = None
    extra_eqs: list[tuple[tuple[Fraction, ...], object]] = field(default_factory=list)

    def matrices(self, orthant: bool = True):
        m = len(self.edges)
        A_ub = [list(r) for r, _ in self.ineqs]
        if orthant:
            A_ub += [[Fraction(-1 if j == i else 0) for j in range(m)] for i in range(m)]
        b_ub = [Fraction(0)] * len(A_ub)
        A_eq = [list(r) for r, _ in self.eqs] + [list(r) for r, _ in self.extra_eqs]
        b_eq = [Fraction(0)] * len(A_eq)
        return A_ub, b_ub, A_eq, b_eq

    def with_hyperplane(self, row: Sequence[Fraction], tag=None) -> "ConeH":
        return ConeH(self.edges, list(self.ineqs), list(self.eqs), None, list(self.extra_eqs) + [(tuple(row), tag)])

    def contains(self, ell: Sequence[Fraction]) -> bool:
        if any(x < 0 for x in ell):
            return False
        dot = lambda r: sum((a * b for a, b in zip(r, ell)), Fraction(0))
        return all(dot(r) <= 0 for r, _ in self.ineqs) and all(dot(r) == 0 for r, _ in self.eqs + self.extra_eqs)

    def dimension(self) -> int:
        return lp.affine_dimension(len(self.edges), *self.matrices(False), nonneg=True)

    def equals(self, other: "ConeH") -> bool:
        return lp.hrep_equal(self.matrices(False), other.matrices(False), nonneg=True)

    def contained_in(self, other: "ConeH") -> bool:
        return lp.hrep_contains(other.matrices(False), self.matrices(False), nonneg=True)

    def reduced(self) -> "ConeH":
        """Same cone with a basis of the equalities and no implied inequalities."""
        eqs: list = []
        for r, z in self.eqs + self.extra_eqs:
            if rank([list(x) for x, _ in eqs] + [list(r)]) > len(eqs):
                eqs.append((r, z))
        A_eq = [list(r) for r, _ in eqs]
        ineqs: list = []
        seen = set()
        for r, z in self.ineqs:
            if r not in seen:
                seen.add(r)
                ineqs.append((r, z))
        i = 0
        while i < len(ineqs):
            rest = ineqs[:i] + ineqs[i + 1 :]
            if lp.implied_upper(list(ineqs[i][0]), 0, [list(r) for r, _ in rest], [0] * len(rest),
                                A_eq, [0] * len(A_eq), nonneg=True):
                ineqs = rest
            else:
                i += 1
        return ConeH(self.edges, ineqs, eqs, self.pair)

    def tight_rows(self, inner: "ConeH") -> list[tuple[Fraction, ...]]:
        """Rows of self (sign rows included) vanishing on all of ``inner``."""
        A_ub, b_ub, A_eq, b_eq = inner.matrices(False)
        out = []
        for r, _ in self.ineqs:
            res = lp.minimize(list(r), A_ub, b_ub, A_eq, b_eq, nonneg=True)
            if res.optimal and res.value == 0:
                out.append(tuple(r))
        m = len(self.edges)
        for i in range(m):
            e = tuple(Fraction(int(j == i)) for j in range(m))
            res = lp.maximize(list(e), A_ub, b_ub, A_eq, b_eq, nonneg=True)
            if res.optimal and res.value == 0:
                out.append(e)
        return out

    def to_json(self) -> dict:
        def row(r, z):
            d = {"coeffs": {e: fmt(c) for e, c in zip(self.edges, r) if c != 0}}
            if z is not None:
                d["circuit"] = circuit_keys(z) if isinstance(z, tuple) else z
            return d

        return {
            "edges": list(self.edges),
            "ineqs": [row(r, z) for r, z in self.ineqs],
            "eqs": [row(r, z) for r, z in self.eqs] + [row(r, z) for r, z in self.extra_eqs],
        }


def cone_hrep(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, cap: int = DEFAULT_CAP) -> ConeH:
    gg = ghost_graph(G, s, pi)
    ineqs, eqs = [], []
    for z in gg.circuits(cap):
        if not gg.is_essential(z):
            continue
        r = gg.row(z)
        if gg.is_integer_circuit(z):
            if any(r):
                eqs.append((r, z))
        else:
            ineqs.append((r, z))
    return ConeH(G.edge_ids, ineqs, eqs, SlopeLevelPair(s, pi))


def _vec(G: Multigraph, ell) -> list[Fraction]:
    e = edge_lengths(G, ell)
    return [e[x] for x in G.edge_ids]


def interior_membership(cone: ConeH, ell: Sequence[Fraction]) -> bool:
    """Strict inequality off the integer subgraph, equality on it, all lengths positive."""
    if any(x <= 0 for x in ell):
        return False
    dot = lambda r: sum((a * b for a, b in zip(r, ell)), Fraction(0))
    return all(dot(r) < 0 for r, _ in cone.ineqs) and all(dot(r) == 0 for r, _ in cone.eqs)


def violated_circuit(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, ell) -> list[str] | None:
    """Keys of a circuit whose open-cone condition fails at ell, or None."""
    cone = cone_hrep(G, s, pi)
    vec = _vec(G, ell)
    dot = lambda r: sum((a * b for a, b in zip(r, vec)), Fraction(0))
    for r, z in cone.ineqs:
        if dot(r) >= 0:
            return circuit_keys(z)
    for r, z in cone.eqs:
        if dot(r) != 0:
            return circuit_keys(z)
    return None


def strict_point(cone: ConeH, extra_eqs: Sequence[Sequence[Fraction]] = (), strict_ineqs: bool = True) -> tuple[Fraction, ...] | None:
    """A point with every length positive (and every inequality strict if asked), or None.

    Solves max t with rows <= -t, lengths >= t, t <= 1 and reports a point when t > 0.
    """
    m = len(cone.edges)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for r, _ in cone.ineqs:
        A_ub.append(list(r) + [Fraction(1) if strict_ineqs else Fraction(0)])
        b_ub.append(Fraction(0))
    for i in range(m):
        A_ub.append([Fraction(-1 if j == i else 0) for j in range(m)] + [Fraction(1)])
        b_ub.append(Fraction(0))
    A_ub.append([Fraction(0)] * m + [Fraction(1)])
    b_ub.append(Fraction(1))
    for r in [r for r, _ in cone.eqs] + [r for r, _ in cone.extra_eqs] + [list(r) for r in extra_eqs]:
        A_eq.append(list(r) + [Fraction(0)])
        b_eq.append(Fraction(0))
    res = lp.maximize([0] * m + [1], A_ub, b_ub, A_eq, b_eq, nonneg=True)
    if not res.optimal or res.value <= 0:
        return None
    return res.x[:m]


def interior_nonempty(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, cone: ConeH | None = None) -> bool:
    cone = cone or cone_hrep(G, s, pi)
    return strict_point(cone) is not None


def integer_graph_genus(G: Multigraph, s: SlopeFunction, pi: OrderedPartition) -> int:
    """Genus of the level graph restricted to integer vertical edges."""
    e_int = slope_sets(s).integer_edges
    parent = list(range(pi.depth))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in e_int:
        x, y = G.ends[e]
        a, b = find(pi.level[x]), find(pi.level[y])
        if a != b:
            parent[a] = b
    comps = len({find(i) for i in range(pi.depth)})
    return len(e_int) - pi.depth + comps


def dimension(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, cone: ConeH | None = None) -> int:
    cone = cone or cone_hrep(G, s, pi)
    if interior_nonempty(G, s, pi, cone):
        return len(G.edge_ids) - integer_graph_genus(G, s, pi)
    return cone.dimension()


# squashing --------------------------------------------------------------------------

def is_active(cone: ConeH, gg: GhostGraph, z: Circuit) -> bool:
    if gg.is_integer_circuit(z):
        return False
    return strict_point(cone, [gg.row(z)], strict_ineqs=False) is not None


def squash(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, z: Circuit, cone: ConeH | None = None) -> SlopeLevelPair:
    """Pass to the face of the cone on the hyperplane of an active essential circuit."""
    gg = ghost_graph(G, s, pi)
    if not gg.is_essential(z):
        raise ConeError(f"circuit {circuit_keys(z)} is not essential")
    cone = cone or cone_hrep(G, s, pi)
    if gg.is_integer_circuit(z):
        raise ConeError(f"circuit {circuit_keys(z)} lies in the integer subgraph, so it is not active")
    if not is_active(cone, gg, z):
        raise ConeError(f"circuit {circuit_keys(z)} is not active: its hyperplane misses the open orthant",
                        certificate="lp: max min-length on cone and hyperplane is 0")
    cov = gg.covered(z)
    for b in cov:
        if s[b] > 0:
            raise ConeError(f"arrow {b.key} covered by a ghost of an active circuit has positive slope")
    in_z = set(t for t in z if isinstance(t, Arrow))
    new = {}
    for a in G.arrows:
        val = s[a]
        if a.rev in in_z and not s.is_integer(a.rev):
            val += 1
        elif a in cov and a.rev in cov and cov[a] & cov[a.rev] and s[a.rev] == 0:
            val += 1
        new[a] = val
    s2 = SlopeFunction(G, new)
    # merge the level intervals spanned by the ghosts of z
    parent = list(range(pi.depth))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in z:
        if isinstance(g, Ghost):
            for w in range(g.head, g.tail):
                a, b = find(w), find(w + 1)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[str]] = {}
    for i, block in enumerate(pi.blocks):
        groups.setdefault(find(i), []).extend(block)
    pi2 = OrderedPartition.of([groups[r] for r in sorted(groups)], G)
    pair = SlopeLevelPair(s2, pi2)
    if not is_slope_level_pair(s2, pi2):
        raise ConeError("squashing produced a slope function incompatible with the merged levels")
    return pair


@dataclass(frozen=True)
class Facet:
    pair: SlopeLevelPair
    circuit: Circuit
    alternatives: tuple[Circuit, ...]
    genus_before: int
    genus_after: int


def _sort_key(z: Circuit) -> tuple:
    return tuple(circuit_keys(z))


def facets(G: Multigraph, s: SlopeFunction, pi: OrderedPartition) -> list[Facet]:
    """Facets of the cone meeting the open orthant, each realized by one squash."""
    cone = cone_hrep(G, s, pi)
    if not interior_nonempty(G, s, pi, cone):
        raise ConeError("facets requested for a pair whose open cone is empty")
    gg = ghost_graph(G, s, pi)
    d = len(G.edge_ids) - integer_graph_genus(G, s, pi)
    faces: list[tuple[ConeH, list[Circuit]]] = []
    for r, z in sorted(cone.ineqs, key=lambda rz: _sort_key(rz[1])):
        if not is_active(cone, gg, z):
            continue
        F = cone.with_hyperplane(r, z)
        if F.dimension() != d - 1:
            continue
        for known, zs in faces:
            if known.equals(F):
                zs.append(z)
                break
        else:
            faces.append((F, [z]))
    g0 = integer_graph_genus(G, s, pi)
    out = []
    for F, zs in faces:
        z = zs[0]
        pair = squash(G, s, pi, z, cone)
        out.append(Facet(pair, z, tuple(zs[1:]), g0, integer_graph_genus(G, pair.s, pair.pi)))
    return out


def face_hrep(cone: ConeH, gg: GhostGraph, z: Circuit) -> ConeH:
    return cone.with_hyperplane(gg.row(z), z)


def rows_span(rows: Iterable[Sequence[Fraction]]) -> int:
    return rank([list(r) for r in rows])
