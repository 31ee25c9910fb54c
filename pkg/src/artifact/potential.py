"""Potentials on metric graphs.

``admissible_extension`` turns vertex values on a metric graph into floor
slopes and the divisor of the piecewise-linear extension. ``subintegrability``
goes the other way: from arrow weights with no positive circuits it builds a
vertex potential whose differences dominate the weights, tight on exactly the
arrows that lie on a zero-weight circuit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .circuits import elementary_circuits
from .graph import (
    Arrow,
    GraphError,
    Multigraph,
    OrderedPartition,
    SlopeFunction,
    edge_lengths,
    level_from,
    slope_from,
)
from .rational import fmt, q

class PotentialError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class AdmissibleDivisor:
    vertex: dict[str, int]
    interior: tuple[tuple[Arrow, Fraction], ...]  # (arrow, distance from its tail); value 1 each

    @property
    def degree(self) -> int:
        return sum(self.vertex.values()) + len(self.interior)

    def to_json(self) -> dict:
        return {
            "vertex": dict(self.vertex),
            "interior": [{"arrow": a.key, "dist": fmt(r)} for a, r in self.interior],
        }


@dataclass(frozen=True)
class Extension:
    slopes: SlopeFunction
    divisor: AdmissibleDivisor


def admissible_extension(G: Multigraph, lengths, h: Mapping[str, object]) -> Extension:
    """Floor slopes of h and the divisor of its admissible extension.

    The vertex part at x is the sum of outgoing slopes. On an edge whose
    length does not divide the height difference, the extension has one
    breakpoint: walking from the lower end it climbs with the steeper slope
    for the remainder r of the division, so the point sits at distance r from
    the lower end.
    """
    ell = edge_lengths(G, lengths)
    hv = {v: q(h[v]) for v in G.vertices.elements}
    s = slope_from(G, ell, hv)
    vertex = {v: 0 for v in G.vertices.elements}
    for a in G.arrows:
        vertex[G.tail(a)] += s[a]
    interior = []
    for e in G.edge_ids:
        up = Arrow(e, 1)
        if hv[G.tail(up)] < hv[G.head(up)]:
            up = up.rev
        diff = hv[G.tail(up)] - hv[G.head(up)]
        r = diff - ell[e] * s[up]
        if r != 0:
            interior.append((up.rev, r))
    return Extension(s, AdmissibleDivisor(vertex, tuple(interior)))


def heights_from_divisor(G: Multigraph, lengths, ext: Extension) -> dict[str, Fraction]:
    """Rebuild vertex values (up to a constant) from slopes and breakpoints.

    Raises when the data are inconsistent around some cycle.
    """
    ell = edge_lengths(G, lengths)
    G.require_connected()
    rem = {a.edge: (a, r) for a, r in ext.divisor.interior}
    diff: dict[Arrow, Fraction] = {}
    for a in G.arrows:
        if a.edge in rem:
            b, r = rem[a.edge]
            up = b.rev
            climb = ell[a.edge] * ext.slopes[up] + r
            diff[a] = climb if a == up else -climb
        else:
            diff[a] = ell[a.edge] * ext.slopes[a]
    root = G.vertices.elements[0]
    h = {root: Fraction(0)}
    stack = [root]
    while stack:
        u = stack.pop()
        for a in G.arrows_from(u):
            v = G.head(a)
            val = h[u] - diff[a]
            if v in h:
                if h[v] != val:
                    raise PotentialError("divisor data inconsistent around a cycle", a)
            else:
                h[v] = val
                stack.append(v)
    return h


# subintegrability --------------------------------------------------------------

def _closure(n: int, weights: list[list[Fraction | None]]) -> list[list[Fraction | None]]:
    """Max-weight walks between all pairs (Floyd-Warshall); None means no walk."""
    d = [row[:] for row in weights]
    for i in range(n):
        if d[i][i] is None or d[i][i] < 0:
            d[i][i] = Fraction(0)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik is None:
                continue
            di = d[i]
            for j in range(n):
                dkj = dk[j]
                if dkj is None:
                    continue
                cand = dik + dkj
                if di[j] is None or cand > di[j]:
                    di[j] = cand
    return d


def _finite_weights(arrows, x) -> tuple[dict, Fraction]:
    finite = [x[t] for t, _, _ in arrows if x[t] is not None]
    big = (sum((abs(v) for v in finite), Fraction(0)) + 1) * (len(arrows) + 1)
    return {t: (x[t] if x[t] is not None else -big) for t, _, _ in arrows}, -big


def subintegrate(
    vertices: Sequence[Hashable],
    arrows: Sequence[tuple[Hashable, Hashable, Hashable]],
    x: Mapping[Hashable, Fraction | None],
    reverse: Mapping[Hashable, Hashable] | None = None,
) -> dict[Hashable, Fraction]:
    """Vertex potential h with x(a) <= h(tail) - h(head) on every arrow.

    ``arrows`` lists ``(token, tail, head)``; ``x[token]`` is a rational or
    ``None`` for minus infinity. Equality holds exactly on arrows lying on a
    circuit of total weight zero; two opposite arrows of an edge form such a
    circuit when their weights cancel. ``reverse`` pairs opposite arrows for
    the guard x(a) + x(rev a) <= 0. The result is normalized to minimum 0.

    Minus infinity is replaced by a finite weight so negative that no circuit
    through it can reach zero. Arrows off every zero circuit are raised by a
    common delta small enough that all circuits stay nonpositive, and the
    potential is read off heaviest walks for the raised weights.
    """
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    if reverse:
        for t, rt in reverse.items():
            if x[t] is not None and x[rt] is not None and x[t] + x[rt] > 0:
                raise PotentialError(f"x({t}) + x({rt}) is positive", t)
    w, _ = _finite_weights(arrows, x)

    def table(weight):
        W: list[list[Fraction | None]] = [[None] * n for _ in range(n)]
        for t, u, v in arrows:
            i, j = idx[u], idx[v]
            if W[i][j] is None or weight[t] > W[i][j]:
                W[i][j] = weight[t]
        return W

    D = _closure(n, table(w))
    for t, u, v in arrows:
        if u == v and w[t] > 0:
            raise PotentialError(f"loop {t} has positive weight", (t,))
    if any(D[i][i] > 0 for i in range(n)):
        witness = next(c for c in elementary_circuits(vertices, arrows) if sum(w[t] for t in c) > 0)
        raise PotentialError("a circuit has positive total weight", witness)

    # arrows on zero-weight circuits, and the largest circuit weight elsewhere
    tight = set()
    worst: Fraction | None = None
    for t, u, v in arrows:
        back = D[idx[v]][idx[u]]
        if back is None:
            continue
        total = w[t] + back
        if total == 0:
            tight.add(t)
        elif worst is None or total > worst:
            worst = total
    shifted = dict(w)
    delta = Fraction(1) if worst is None else -worst / (len(arrows) + 1)
    for t, _, _ in arrows:
        if t not in tight and x[t] is not None:
            shifted[t] = w[t] + delta
    D2 = _closure(n, table(shifted))
    # p(v) = heaviest walk ending at v from anywhere; h = -p works
    p = []
    for j in range(n):
        best = Fraction(0)
        for i in range(n):
            if D2[i][j] is not None and D2[i][j] > best:
                best = D2[i][j]
        p.append(best)
    h = [-v for v in p]
    low = min(h)
    return {v: h[idx[v]] - low for v in vertices}


def _arrow_table(G: Multigraph):
    return [(a, G.tail(a), G.head(a)) for a in G.arrows]


def subintegrability(G: Multigraph, x: Mapping) -> dict[str, Fraction]:
    """Potential dominating arrow weights on a multigraph (keys may be Arrow or 'e:+')."""
    vals: dict[Arrow, Fraction | None] = {}
    for k, v in x.items():
        a = k if isinstance(k, Arrow) else G.arrow(k)
        vals[a] = None if v is None or v == "-inf" else q(v)
    for a in G.arrows:
        if a not in vals:
            raise PotentialError(f"weight missing for arrow {a.key}", a)
    return subintegrate(G.vertices.elements, _arrow_table(G), vals, {a: a.rev for a in G.arrows})


def check_subintegral(G: Multigraph, x: Mapping[Arrow, Fraction | None], h: Mapping[str, Fraction]) -> list[str]:
    """Problems with h as a certificate for x, found by brute-force circuit enumeration."""
    problems = []
    circuits = elementary_circuits(G.vertices.elements, _arrow_table(G))
    on_zero = set()
    for c in circuits:
        if all(x[a] is not None for a in c) and sum(x[a] for a in c) == 0:
            on_zero.update(c)
    for a in G.arrows:
        d = h[G.tail(a)] - h[G.head(a)]
        if x[a] is None:
            continue
        if x[a] > d:
            problems.append(f"{a.key}: weight exceeds potential difference")
        tight_expected = a in on_zero or (x[a.rev] is not None and x[a] + x[a.rev] == 0)
        if (x[a] == d) != tight_expected:
            problems.append(f"{a.key}: equality {'missing' if tight_expected else 'unexpected'}")
    return problems


# level recovery ----------------------------------------------------------------------

def recover_level_function(G: Multigraph, lengths, s: SlopeFunction, pi: OrderedPartition) -> dict[str, Fraction]:
    """A level function h realizing (s, pi) at the edge lengths.

    Raises :class:`PotentialError` naming a violated circuit inequality when the
    lengths lie outside the open cone of the pair.
    """
    from .cones import ghost_graph, violated_circuit

    ell = edge_lengths(G, lengths)
    bad = violated_circuit(G, s, pi, ell)
    if bad is not None:
        raise PotentialError(f"edge lengths violate the inequality of circuit {bad}", bad)
    gg = ghost_graph(G, s, pi)
    x = {}
    for tok in gg.arrow_tokens():
        x[tok] = gg.weight(tok, ell)
    levels = list(range(pi.depth))
    hl = subintegrate(levels, gg.arrow_triples(), x)
    h = {v: hl[pi.level[v]] for v in G.vertices.elements}
    if slope_from(G, ell, h) != s or level_from(G, h) != pi:
        raise PotentialError("recovered levels do not reproduce the slope-level pair")
    return h
