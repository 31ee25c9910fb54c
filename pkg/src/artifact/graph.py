"""Multigraphs with arrows, ordered partitions of the vertices, slope functions.

Every edge ``e`` with ends ``(x, y)`` carries two arrows: ``(e, +1)`` from x to y
and ``(e, -1)`` from y to x. Loops carry two arrows as well, so parallel edges
and loops never need special cases.

An ordered partition lists its blocks from the lowest level to the highest.
An arrow is upward when its tail sits on a strictly higher level than its head.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .rational import fmt, q
from .setfn import GroundSet, SetFunction, bits


class GraphError(ValueError):
    pass


class Arrow(NamedTuple):
    edge: str
    sign: int  # +1 runs ends[0] -> ends[1]

    @property
    def key(self) -> str:
        return f"{self.edge}:{'+' if self.sign > 0 else '-'}"

    @property
    def rev(self) -> "Arrow":
        return Arrow(self.edge, -self.sign)

    @classmethod
    def parse(cls, key: str) -> "Arrow":
        edge, _, sgn = key.rpartition(":")
        if not edge or sgn not in "+-" or not sgn:
            raise GraphError(f"bad arrow key {key!r}; expected 'edge:+' or 'edge:-'")
        return cls(edge, 1 if sgn == "+" else -1)

    def __str__(self) -> str:
        return self.key


class Multigraph:
    """A finite multigraph with a vertex genus function."""

    def __init__(self, vertices: Sequence[str], edges: Sequence[tuple[str, tuple[str, str]]],
                 genus: Mapping[str, int] | None = None):
        self.vertices = GroundSet(tuple(vertices))
        self.edges: tuple[tuple[str, tuple[str, str]], ...] = tuple((e, (a, b)) for e, (a, b) in edges)
        ids = [e for e, _ in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphError("edge ids must be distinct")
        vset = set(self.vertices.elements)
        for e, (a, b) in self.edges:
            if a not in vset or b not in vset:
                raise GraphError(f"edge {e} has an unknown endpoint")
        self.genus_fn = {v: int((genus or {}).get(v, 0)) for v in self.vertices.elements}
        if any(x < 0 for x in self.genus_fn.values()):
            raise GraphError("vertex genera must be nonnegative")
        self.ends = dict(self.edges)
        self.edge_ids = tuple(ids)
        self.edge_pos = {e: i for i, e in enumerate(ids)}
        self.arrows: tuple[Arrow, ...] = tuple(Arrow(e, s) for e in ids for s in (1, -1))
        self.arrow_pos = {a: i for i, a in enumerate(self.arrows)}

    # JSON -------------------------------------------------------------------
    @classmethod
    def from_json(cls, obj: Mapping) -> "Multigraph":
        try:
            edges = [(d["id"], tuple(d["ends"])) for d in obj["edges"]]
            for _, ends in edges:
                if len(ends) != 2:
                    raise GraphError("each edge needs exactly two ends")
            return cls(obj["vertices"], edges, obj.get("genus"))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices.elements),
            "edges": [{"id": e, "ends": list(ab)} for e, ab in self.edges],
            "genus": dict(self.genus_fn),
        }

    # structure --------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.vertices.n

    def vindex(self, v: str) -> int:
        return self.vertices.index(v)

    def tail(self, a: Arrow) -> str:
        x, y = self.ends[a.edge]
        return x if a.sign > 0 else y

    def head(self, a: Arrow) -> str:
        x, y = self.ends[a.edge]
        return y if a.sign > 0 else x

    def is_loop(self, e: str) -> bool:
        x, y = self.ends[e]
        return x == y

    def arrows_from(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if self.tail(a) == v]

    def arrow(self, key: str) -> Arrow:
        a = Arrow.parse(key)
        if a.edge not in self.ends:
            raise GraphError(f"unknown edge in arrow {key!r}")
        return a

    def tail_mask(self, a: Arrow) -> int:
        return 1 << self.vindex(self.tail(a))

    def head_mask(self, a: Arrow) -> int:
        return 1 << self.vindex(self.head(a))

    def components(self, verts: Iterable[str] | None = None) -> list[frozenset[str]]:
        """Connected components of the subgraph induced on ``verts``."""
        vs = set(self.vertices.elements if verts is None else verts)
        adj: dict[str, list[str]] = {v: [] for v in vs}
        for _, (a, b) in self.edges:
            if a in vs and b in vs:
                adj[a].append(b)
                adj[b].append(a)
        seen: set[str] = set()
        comps = []
        for v in self.vertices.elements:
            if v not in vs or v in seen:
                continue
            comp = {v}
            dq = deque([v])
            while dq:
                x = dq.popleft()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        dq.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    @property
    def cycle_rank(self) -> int:
        """|E| - |V| + 1, the genus of the underlying graph."""
        return len(self.edges) - self.n + 1

    @property
    def total_genus(self) -> int:
        return self.cycle_rank + sum(self.genus_fn.values())

    def genus_sum(self, mask: int) -> int:
        el = self.vertices.elements
        return sum(self.genus_fn[el[i]] for i in bits(mask))

    def genus_setfn(self) -> SetFunction:
        return SetFunction.from_callable(self.vertices, self.genus_sum)

    def require_connected(self) -> None:
        if not self.is_connected():
            raise GraphError("graph not connected")


@dataclass(frozen=True)
class Validation:
    connected: bool
    genus: int
    total_genus: int


def validate(G: Multigraph) -> Validation:
    G.require_connected()
    return Validation(True, G.cycle_rank, G.total_genus)


# ordered partitions -----------------------------------------------------------

@dataclass(frozen=True)
class OrderedPartition:
    blocks: tuple[frozenset[str], ...]
    level: Mapping[str, int] = field(compare=False, hash=False, repr=False)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[str]], G: Multigraph | None = None) -> "OrderedPartition":
        bl = tuple(frozenset(b) for b in blocks)
        if any(not b for b in bl):
            raise GraphError("partition blocks must be nonempty")
        level = {}
        for i, b in enumerate(bl):
            for v in b:
                if v in level:
                    raise GraphError(f"vertex {v} appears in two blocks")
                level[v] = i
        if G is not None and set(level) != set(G.vertices.elements):
            raise GraphError("partition does not cover the vertex set exactly")
        return cls(bl, level)

    @classmethod
    def trivial(cls, G: Multigraph) -> "OrderedPartition":
        return cls.of([G.vertices.elements])

    @classmethod
    def from_json(cls, obj, G: Multigraph | None = None) -> "OrderedPartition":
        return cls.of(obj, G)

    def to_json(self, G: Multigraph | None = None) -> list[list[str]]:
        order = G.vertices.elements if G is not None else None
        out = []
        for b in self.blocks:
            out.append([v for v in order if v in b] if order else sorted(b))
        return out

    @property
    def depth(self) -> int:
        return len(self.blocks)

    def is_upward(self, G: Multigraph, a: Arrow) -> bool:
        return self.level[G.tail(a)] > self.level[G.head(a)]

    def is_vertical(self, G: Multigraph, e: str) -> bool:
        x, y = G.ends[e]
        return self.level[x] != self.level[y]

    def upward_arrows(self, G: Multigraph) -> frozenset[Arrow]:
        return frozenset(a for a in G.arrows if self.is_upward(G, a))

    def coarsens(self, finer: "OrderedPartition") -> bool:
        """True when every block of ``finer`` lies in a block of self, preserving order."""
        for b in finer.blocks:
            if len({self.level[v] for v in b}) != 1:
                return False
        for x in finer.level:
            for y in finer.level:
                if finer.level[x] < finer.level[y] and self.level[x] > self.level[y]:
                    return False
        return True

    def key(self, G: Multigraph) -> tuple:
        return tuple(tuple(v for v in G.vertices.elements if v in b) for b in self.blocks)

    def block_mask(self, G: Multigraph, i: int) -> int:
        return G.vertices.mask(self.blocks[i])


def level_from(G: Multigraph, h: Mapping[str, object]) -> OrderedPartition:
    vals = {v: q(h[v]) for v in G.vertices.elements}
    distinct = sorted(set(vals.values()))
    return OrderedPartition.of([[v for v in G.vertices.elements if vals[v] == x] for x in distinct], G)


# slope functions ------------------------------------------------------------

class SlopeFunction(Mapping):
    """Integer arrow labels with s(a) + s(rev a) in {-1, 0}."""

    def __init__(self, G: Multigraph, values: Mapping[Arrow, int]):
        self.graph = G
        vals = {}
        for a in G.arrows:
            if a not in values:
                raise GraphError(f"slope missing for arrow {a.key}")
            x = values[a]
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise GraphError(f"slope of {a.key} is not an integer")
                x = int(x)
            if isinstance(x, bool) or not isinstance(x, int):
                raise GraphError(f"slope of {a.key} is not an integer")
            vals[a] = x
        for a in G.arrows:
            if vals[a] + vals[a.rev] not in (-1, 0):
                raise GraphError(f"s({a.key}) + s({a.rev.key}) must be -1 or 0")
        self._v = vals

    def __getitem__(self, a: Arrow) -> int:
        return self._v[a]

    def __iter__(self) -> Iterator[Arrow]:
        return iter(self.graph.arrows)

    def __len__(self) -> int:
        return len(self._v)

    def __eq__(self, other) -> bool:
        return isinstance(other, SlopeFunction) and self._v == other._v

    def __hash__(self) -> int:
        return hash(tuple(self._v[a] for a in self.graph.arrows))

    def __repr__(self) -> str:
        return "SlopeFunction(" + ", ".join(f"{a.key}={self._v[a]}" for a in self.graph.arrows) + ")"

    @classmethod
    def zero(cls, G: Multigraph) -> "SlopeFunction":
        return cls(G, {a: 0 for a in G.arrows})

    @classmethod
    def from_json(cls, G: Multigraph, obj: Mapping[str, object]) -> "SlopeFunction":
        vals: dict[Arrow, int] = {}
        for k, v in obj.items():
            a = G.arrow(k)
            x = q(v) if not isinstance(v, int) else Fraction(v)
            if x.denominator != 1:
                raise GraphError(f"slope of {k} is not an integer")
            vals[a] = int(x)
        # horizontal arrows may be omitted and default to zero
        for a in G.arrows:
            vals.setdefault(a, 0)
        return cls(G, vals)

    def to_json(self) -> dict[str, int]:
        return {a.key: self._v[a] for a in self.graph.arrows}

    def key(self) -> tuple[int, ...]:
        return tuple(self._v[a] for a in self.graph.arrows)

    def is_integer(self, a: Arrow) -> bool:
        return self._v[a] + self._v[a.rev] == 0

    def is_upward(self, a: Arrow) -> bool:
        return self._v[a.rev] < 0

    def is_horizontal(self, a: Arrow) -> bool:
        return self._v[a] == 0 and self._v[a.rev] == 0

    def __ge__(self, other: "SlopeFunction") -> bool:
        return all(self._v[a] >= other[a] for a in self.graph.arrows)

    def __le__(self, other: "SlopeFunction") -> bool:
        return other >= self


def floor_div(x: Fraction, y: Fraction) -> int:
    return floor(x / y)


def slope_from(G: Multigraph, lengths: Mapping[str, object], h: Mapping[str, object]) -> SlopeFunction:
    ell = edge_lengths(G, lengths)
    hv = {v: q(h[v]) for v in G.vertices.elements}
    return SlopeFunction(G, {a: floor_div(hv[G.tail(a)] - hv[G.head(a)], ell[a.edge]) for a in G.arrows})


def edge_lengths(G: Multigraph, lengths: Mapping[str, object] | Sequence) -> dict[str, Fraction]:
    if isinstance(lengths, Mapping):
        ell = {e: q(lengths[e]) for e in G.edge_ids}
    else:
        if len(lengths) != len(G.edge_ids):
            raise GraphError("edge length vector has the wrong size")
        ell = {e: q(x) for e, x in zip(G.edge_ids, lengths)}
    if any(x <= 0 for x in ell.values()):
        raise GraphError("edge lengths must be strictly positive")
    return ell


@dataclass(frozen=True)
class SlopeSets:
    upward: frozenset[Arrow]
    downward: frozenset[Arrow]
    integer_edges: frozenset[str]
    integer_upward: frozenset[Arrow]
    horizontal: frozenset[Arrow]

    def to_json(self) -> dict:
        return {
            "A_s": sorted(a.key for a in self.upward),
            "A_s_bar": sorted(a.key for a in self.downward),
            "E_int": sorted(self.integer_edges),
            "A_int": sorted(a.key for a in self.integer_upward),
            "horizontal": sorted(a.key for a in self.horizontal),
        }


def slope_sets(s: SlopeFunction) -> SlopeSets:
    G = s.graph
    up = frozenset(a for a in G.arrows if s.is_upward(a))
    down = frozenset(a.rev for a in up)
    a_int = frozenset(a for a in up if s.is_integer(a))
    e_int = frozenset(a.edge for a in a_int)
    hor = frozenset(a for a in G.arrows if s.is_horizontal(a))
    return SlopeSets(up, down, e_int, a_int, hor)


@dataclass(frozen=True)
class SlopeLevelPair:
    s: SlopeFunction
    pi: OrderedPartition

    @property
    def graph(self) -> Multigraph:
        return self.s.graph

    def key(self) -> tuple:
        return (self.s.key(), self.pi.key(self.s.graph))

    def __eq__(self, other) -> bool:
        return isinstance(other, SlopeLevelPair) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def to_json(self) -> dict:
        return {"slopes": self.s.to_json(), "partition": self.pi.to_json(self.graph)}

    @classmethod
    def from_json(cls, G: Multigraph, obj: Mapping) -> "SlopeLevelPair":
        pair = cls(SlopeFunction.from_json(G, obj["slopes"]), OrderedPartition.from_json(obj["partition"], G))
        require_pair(pair)
        return pair


def is_slope_level_pair(s: SlopeFunction, pi: OrderedPartition) -> bool:
    return slope_sets(s).upward == pi.upward_arrows(s.graph)


def require_pair(pair: SlopeLevelPair) -> None:
    if not is_slope_level_pair(pair.s, pair.pi):
        raise GraphError("slope function and partition disagree on upward arrows")


def zeta(s: SlopeFunction) -> SetFunction:
    """zeta_s(I) = #upward arrows entering I from outside + sum of s over arrows leaving I."""
    G = s.graph
    up = slope_sets(s).upward
    tm = {a: G.tail_mask(a) for a in G.arrows}
    hm = {a: G.head_mask(a) for a in G.arrows}

    def value(I: int) -> int:
        total = 0
        for a in G.arrows:
            t_in = bool(tm[a] & I)
            h_in = bool(hm[a] & I)
            if t_in and not h_in:
                total += s[a]
            elif h_in and not t_in and a in up:
                total += 1
        return total

    return SetFunction.from_callable(G.vertices, value)


def arrows_within(G: Multigraph, arrows: Iterable[Arrow], I: int, J: int | None = None) -> int:
    """Count arrows with tail in I and head in J (J defaults to I)."""
    if J is None:
        J = I
    return sum(1 for a in arrows if G.tail_mask(a) & I and G.head_mask(a) & J)


def pair_from_levels(G: Multigraph, lengths, h) -> SlopeLevelPair:
    return SlopeLevelPair(slope_from(G, lengths, h), level_from(G, h))


def fmt_lengths(G: Multigraph, ell: Mapping[str, Fraction]) -> dict[str, str]:
    return {e: fmt(ell[e]) for e in G.edge_ids}
