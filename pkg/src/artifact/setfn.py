"""Set functions on a finite ground set, stored as dense exact tables.

A subset of the ground set is a bitmask: bit ``i`` stands for ``elements[i]``.
All values are :class:`fractions.Fraction`. The dense representation caps the
ground set at 20 elements, which is far beyond anything the graph modules
produce, and makes every exhaustive check a plain loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from . import lp
from .rational import fmt, q

MAX_GROUND = 20


class SetFunctionError(ValueError):
    pass


@dataclass(frozen=True)
class GroundSet:
    elements: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not 1 <= len(self.elements) <= MAX_GROUND:
            raise SetFunctionError(f"ground set size must be in 1..{MAX_GROUND}, got {len(self.elements)}")
        if len(set(self.elements)) != len(self.elements):
            raise SetFunctionError("ground set labels must be distinct")

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise SetFunctionError(f"unknown element {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def labels(self, mask: int) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def key(self, mask: int) -> str:
        return ",".join(self.labels(mask))

    def subsets(self) -> range:
        return range(1 << self.n)


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Properties:
    submodular: bool
    supermodular: bool
    nondecreasing: bool
    nonnegative: bool
    positive: bool
    simple: bool
    range: Fraction

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("submodular", "supermodular", "nondecreasing", "nonnegative", "positive", "simple")}
        d["range"] = fmt(self.range)
        return d


class SetFunction:
    """An exact function 2^V -> Q with value 0 on the empty set."""

    __slots__ = ("ground", "values")

    def __init__(self, ground: GroundSet, values: Sequence):
        vals = tuple(q(x) for x in values)
        if len(vals) != 1 << ground.n:
            raise SetFunctionError(f"expected {1 << ground.n} values, got {len(vals)}")
        if vals[0] != 0:
            raise SetFunctionError("a set function must vanish on the empty set")
        self.ground = ground
        self.values = vals

    # construction -------------------------------------------------------
    @classmethod
    def from_callable(cls, ground: GroundSet, fn: Callable[[int], object]) -> "SetFunction":
        return cls(ground, [fn(m) for m in ground.subsets()])

    @classmethod
    def zero(cls, ground: GroundSet) -> "SetFunction":
        return cls(ground, [0] * (1 << ground.n))

    @classmethod
    def from_json(cls, obj: Mapping) -> "SetFunction":
        ground = GroundSet(tuple(obj["ground"]))
        vals = [Fraction(0)] * (1 << ground.n)
        seen = set()
        for k, v in obj["values"].items():
            labels = [x for x in k.split(",") if x] if k else []
            m = ground.mask(labels)
            vals[m] = q(v)
            seen.add(m)
        missing = [m for m in ground.subsets() if m and m not in seen]
        if missing:
            raise SetFunctionError(f"missing value for subset {{{ground.key(missing[0])}}}")
        return cls(ground, vals)

    def to_json(self) -> dict:
        return {
            "ground": list(self.ground.elements),
            "values": {self.ground.key(m): fmt(v) for m, v in enumerate(self.values)},
        }

    # access ---------------------------------------------------------------
    def __call__(self, subset) -> Fraction:
        if isinstance(subset, int):
            return self.values[subset]
        return self.values[self.ground.mask(subset)]

    def __getitem__(self, mask: int) -> Fraction:
        return self.values[mask]

    @property
    def range(self) -> Fraction:
        return self.values[self.ground.full]

    def __eq__(self, other) -> bool:
        return isinstance(other, SetFunction) and self.ground == other.ground and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.ground, self.values))

    def __repr__(self) -> str:
        body = ", ".join(f"{{{self.ground.key(m)}}}: {fmt(v)}" for m, v in enumerate(self.values) if m)
        return f"SetFunction({body})"

    def _check(self, other: "SetFunction") -> None:
        if self.ground != other.ground:
            raise SetFunctionError("set functions live on different ground sets")

    def __add__(self, other: "SetFunction") -> "SetFunction":
        self._check(other)
        return SetFunction(self.ground, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "SetFunction") -> "SetFunction":
        self._check(other)
        return SetFunction(self.ground, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> "SetFunction":
        return SetFunction(self.ground, [-a for a in self.values])

    def scale(self, c) -> "SetFunction":
        c = q(c)
        return SetFunction(self.ground, [c * a for a in self.values])

    def __le__(self, other: "SetFunction") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def __ge__(self, other: "SetFunction") -> bool:
        return other <= self

    def is_modular(self) -> bool:
        n = self.ground.n
        singles = [self.values[1 << i] for i in range(n)]
        return all(v == sum((singles[i] for i in bits(m)), Fraction(0)) for m, v in enumerate(self.values))


# predicates ---------------------------------------------------------------

def _pair_gaps(f: SetFunction) -> Iterator[Fraction]:
    """f(S+i)+f(S+j)-f(S+i+j)-f(S) over all S and i<j outside S.

    Nonnegativity of all gaps is equivalent to submodularity.
    """
    n = f.ground.n
    v = f.values
    for S in f.ground.subsets():
        out = [i for i in range(n) if not S >> i & 1]
        for a in range(len(out)):
            bi = 1 << out[a]
            for b in range(a + 1, len(out)):
                bj = 1 << out[b]
                yield v[S | bi] + v[S | bj] - v[S | bi | bj] - v[S]


def is_submodular(f: SetFunction) -> bool:
    return all(g >= 0 for g in _pair_gaps(f))


def is_supermodular(f: SetFunction) -> bool:
    return all(g <= 0 for g in _pair_gaps(f))


def is_nondecreasing(f: SetFunction) -> bool:
    v = f.values
    n = f.ground.n
    return all(v[S] <= v[S | 1 << i] for S in f.ground.subsets() for i in range(n) if not S >> i & 1)


def is_simple(f: SetFunction) -> bool:
    full = f.ground.full
    v = f.values
    return all(v[I] + v[full ^ I] > v[full] for I in range(1, full) if I < full ^ I)


def properties(f: SetFunction) -> Properties:
    vals = f.values
    return Properties(
        submodular=is_submodular(f),
        supermodular=is_supermodular(f),
        nondecreasing=is_nondecreasing(f),
        nonnegative=all(x >= 0 for x in vals),
        positive=all(x > 0 for x in vals[1:]),
        simple=is_simple(f),
        range=f.range,
    )


# transforms ---------------------------------------------------------------

def adjoint(f: SetFunction) -> SetFunction:
    full = f.ground.full
    v = f.values
    return SetFunction(f.ground, [v[full] - v[full ^ m] for m in f.ground.subsets()])


def upmin(f: SetFunction) -> SetFunction:
    """chi(I) = min over K containing I of f(K), by a per-element superset sweep."""
    chi = list(f.values)
    n = f.ground.n
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if not m & bit:
                other = chi[m | bit]
                if other < chi[m]:
                    chi[m] = other
    # the empty set keeps its value 0 by convention
    chi[0] = Fraction(0)
    return SetFunction(f.ground, chi)


def downsum(eps: SetFunction) -> SetFunction:
    """DownSum(eps)(I) = sum of eps(J) over J contained in I (zeta transform)."""
    t = list(eps.values)
    n = eps.ground.n
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if m & bit:
                t[m] += t[m ^ bit]
    return SetFunction(eps.ground, t)


def characteristic(ground: GroundSet, J) -> SetFunction:
    """The indicator 1_J of the single subset J (J nonempty)."""
    m = J if isinstance(J, int) else ground.mask(J)
    if m == 0:
        raise SetFunctionError("the indicator of the empty set is not a set function")
    return SetFunction.from_callable(ground, lambda I: int(I == m))


def xi_of(ground: GroundSet, J) -> SetFunction:
    """xi_J(I) = -1 when I contains J and 0 otherwise; J must be nonempty."""
    m = J if isinstance(J, int) else ground.mask(J)
    if m == 0:
        raise SetFunctionError("xi of the empty set would be -1 on the empty set")
    return SetFunction.from_callable(ground, lambda I: -1 if I & m == m else 0)


def xi_multi(ground: GroundSet, Js: Iterable) -> SetFunction:
    """Sum of xi_J over a multiset of nonempty subsets."""
    total = SetFunction.zero(ground)
    for J in Js:
        total = total + xi_of(ground, J)
    return total


def modular(ground: GroundSet, weights: Mapping[str, object] | Sequence) -> SetFunction:
    if isinstance(weights, Mapping):
        w = [q(weights[e]) for e in ground.elements]
    else:
        w = [q(x) for x in weights]
    return SetFunction.from_callable(ground, lambda I: sum((w[i] for i in bits(I)), Fraction(0)))


# base polytopes -------------------------------------------------------------

@dataclass(frozen=True)
class PolytopeH:
    """{q in Q^V : a.q <= b for each inequality, a.q = b for each equality}."""

    ambient: GroundSet
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def matrices(self):
        A_ub = [list(a) for a, _ in self.inequalities]
        b_ub = [b for _, b in self.inequalities]
        A_eq = [list(a) for a, _ in self.equalities]
        b_eq = [b for _, b in self.equalities]
        return A_ub, b_ub, A_eq, b_eq

    def contains(self, point: Sequence) -> bool:
        p = [q(x) for x in point]
        for a, b in self.inequalities:
            if sum((x * y for x, y in zip(a, p)), Fraction(0)) > b:
                return False
        for a, b in self.equalities:
            if sum((x * y for x, y in zip(a, p)), Fraction(0)) != b:
                return False
        return True

    def intersect(self, other: "PolytopeH") -> "PolytopeH":
        return PolytopeH(self.ambient, self.inequalities + other.inequalities, self.equalities + other.equalities)

    def dimension(self) -> int:
        return lp.affine_dimension(self.ambient.n, *self.matrices())

    def equals(self, other: "PolytopeH") -> bool:
        return lp.hrep_equal(self.matrices(), other.matrices())

    def canonical(self) -> "PolytopeH":
        """Drop inequalities implied by the remaining rows (exact LP redundancy test)."""
        ineqs = list(self.inequalities)
        i = 0
        while i < len(ineqs):
            rest = ineqs[:i] + ineqs[i + 1 :]
            a, b = ineqs[i]
            if lp.implied_upper(list(a), b, [list(r) for r, _ in rest], [s for _, s in rest],
                                [list(r) for r, _ in self.equalities], [s for _, s in self.equalities]):
                ineqs = rest
            else:
                i += 1
        return PolytopeH(self.ambient, tuple(ineqs), self.equalities)

    def to_json(self) -> dict:
        names = self.ambient.elements

        def row(a, b):
            return {"coeffs": {names[i]: fmt(c) for i, c in enumerate(a) if c != 0}, "rhs": fmt(b)}

        return {
            "ground": list(names),
            "inequalities": [row(a, b) for a, b in self.inequalities],
            "equalities": [row(a, b) for a, b in self.equalities],
        }


def _indicator_row(ground: GroundSet, m: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(m >> i & 1) for i in range(ground.n))


def polytope_hrep(f: SetFunction) -> PolytopeH:
    """Base polytope {q : q(I) <= f(I) for proper nonempty I, q(V) = f(V)}."""
    if not is_submodular(f):
        raise SetFunctionError("base polytope requested for a non-submodular function")
    g = f.ground
    ineqs = tuple((_indicator_row(g, m), f.values[m]) for m in range(1, g.full))
    eqs = ((_indicator_row(g, g.full), f.range),)
    return PolytopeH(g, ineqs, eqs)


def simplex_hrep(ground: GroundSet, g) -> PolytopeH:
    """The simplex {q >= 0, q(V) = g}."""
    n = ground.n
    ineqs = tuple((tuple(Fraction(-1 if j == i else 0) for j in range(n)), Fraction(0)) for i in range(n))
    eqs = ((_indicator_row(ground, ground.full), q(g)),)
    return PolytopeH(ground, ineqs, eqs)


def polytope_contains(f: SetFunction, point: Sequence) -> bool:
    """Direct membership in the base polytope, without building rows."""
    p = [q(x) for x in point]
    sums = [Fraction(0)] * (1 << f.ground.n)
    for m in range(1, 1 << f.ground.n):
        low = m & -m
        sums[m] = sums[m ^ low] + p[low.bit_length() - 1]
    full = f.ground.full
    return sums[full] == f.range and all(sums[m] <= f.values[m] for m in range(1, full))


def proper_bipartitions(ground: GroundSet) -> Iterator[tuple[int, int]]:
    full = ground.full
    for I in range(1, full):
        if I < full ^ I:
            yield I, full ^ I


def all_subsets_of_size(ground: GroundSet, k: int) -> Iterator[int]:
    for c in combinations(range(ground.n), k):
        yield sum(1 << i for i in c)
