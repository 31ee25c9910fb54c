"""Exact subspaces of a direct sum of blocks, and their projection dimensions.

A :class:`DecomposedSpace` is Q^d split into one coordinate block per element
of a ground set. A :class:`RationalSubspace` keeps its basis in reduced
row-echelon form, so equal subspaces have identical bases. ``nu_star`` maps a
subspace to the set function I -> dim of its projection onto the blocks in I.

The realizability checks cut a subspace by flags or by hyperplanes built from
seeded random rationals and compare ``nu_star`` of the result with the UpMin
transform it should have. A random draw that lands in special position is
detected by that comparison and redrawn, up to a fixed number of attempts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .rational import Matrix, fmt, nullspace, q, rank, rref
from .setfn import GroundSet, SetFunction, bits, upmin, xi_multi

NUM_BOUND = 10**6
DENOMINATOR = 1_000_003  # prime
MAX_ATTEMPTS = 5


class QLinAlgError(ValueError):
    pass


class PreconditionError(QLinAlgError):
    """nu* + xi is negative somewhere; ``zero_blocks`` lists blocks the cut space misses."""

    def __init__(self, message: str, zero_blocks: Sequence[str] = ()):
        super().__init__(message)
        self.zero_blocks = list(zero_blocks)


class GeneralPositionError(QLinAlgError):
    """Every random draw failed to realize the expected set function."""


class DegenerateError(QLinAlgError):
    pass


# spaces --------------------------------------------------------------------------------

@dataclass(frozen=True)
class DecomposedSpace:
    ground: GroundSet
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != self.ground.n:
            raise QLinAlgError("one block dimension per ground element is required")
        if any(d < 0 for d in self.dims):
            raise QLinAlgError("block dimensions must be nonnegative")

    @classmethod
    def of(cls, labels: Sequence[str], dims: Sequence[int]) -> "DecomposedSpace":
        return cls(GroundSet(tuple(labels)), tuple(dims))

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return tuple(out)

    def block(self, i: int) -> range:
        o = self.offsets[i]
        return range(o, o + self.dims[i])

    def columns(self, mask: int) -> list[int]:
        return [c for i in bits(mask) for c in self.block(i)]

    def block_dim(self, mask: int) -> int:
        return sum(self.dims[i] for i in bits(mask))

    def embed(self, mask: int, row: Sequence[Fraction]) -> list[Fraction]:
        """A functional on the blocks in ``mask`` as a functional on the whole space."""
        cols = self.columns(mask)
        if len(row) != len(cols):
            raise QLinAlgError(f"expected {len(cols)} coordinates, got {len(row)}")
        out = [Fraction(0)] * self.total
        for c, x in zip(cols, row):
            out[c] = q(x)
        return out


class RationalSubspace:
    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: DecomposedSpace, rows: Sequence[Sequence]):
        n = ambient.total
        rows = [[q(x) for x in r] for r in rows]
        if any(len(r) != n for r in rows):
            raise QLinAlgError(f"vectors must have {n} coordinates")
        self.ambient = ambient
        self.basis: Matrix = rref(rows, n)[0] if rows else []

    @classmethod
    def whole(cls, ambient: DecomposedSpace) -> "RationalSubspace":
        n = ambient.total
        return cls(ambient, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def kernel(cls, ambient: DecomposedSpace, equations: Sequence[Sequence]) -> "RationalSubspace":
        return cls(ambient, nullspace([[q(x) for x in r] for r in equations], ambient.total))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def projection(self, mask: int) -> Matrix:
        cols = self.ambient.columns(mask)
        return [[row[c] for c in cols] for row in self.basis]

    def proj_dim(self, mask: int) -> int:
        if not self.basis or not self.ambient.columns(mask):
            return 0
        return rank(self.projection(mask))

    def contains(self, vec: Sequence) -> bool:
        return rank(self.basis + [[q(x) for x in vec]]) == self.dim

    def issubspace(self, other: "RationalSubspace") -> bool:
        return all(other.contains(r) for r in self.basis)

    def cut(self, equations: Sequence[Sequence[Fraction]]) -> "RationalSubspace":
        """Intersection with the common kernel of functionals on the whole space."""
        if not equations or not self.basis:
            return self
        # x = c B; each equation f gives sum_j c_j (f . B_j) = 0
        M = [[sum((a * b for a, b in zip(f, row)), Fraction(0)) for row in self.basis] for f in equations]
        coeffs = nullspace(M, self.dim)
        rows = [[sum((c * row[k] for c, row in zip(cv, self.basis)), Fraction(0)) for k in range(self.ambient.total)]
                for cv in coeffs]
        return RationalSubspace(self.ambient, rows)

    def cut_preimage(self, mask: int, equations: Sequence[Sequence[Fraction]]) -> "RationalSubspace":
        """W intersected with proj_I^{-1} of the kernel of functionals on U_I."""
        return self.cut([self.ambient.embed(mask, f) for f in equations])

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalSubspace) and self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, tuple(map(tuple, self.basis))))

    def __repr__(self) -> str:
        return f"RationalSubspace(dim={self.dim}, ambient={self.ambient.dims})"

    def to_json(self) -> dict:
        return {
            "blocks": {v: d for v, d in zip(self.ambient.ground.elements, self.ambient.dims)},
            "dim": self.dim,
            "basis": [[fmt(x) for x in row] for row in self.basis],
        }


def nu_star(W: RationalSubspace) -> SetFunction:
    """I -> dim proj_I(W)."""
    return SetFunction.from_callable(W.ambient.ground, W.proj_dim)


def zero_blocks(W: RationalSubspace) -> list[str]:
    g = W.ambient.ground
    return [v for i, v in enumerate(g.elements) if W.proj_dim(1 << i) == 0]


# randomness -------------------------------------------------------------------------

def make_rng(seed: int, attempt: int = 0) -> random.Random:
    return random.Random(f"{seed}/{attempt}")


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-NUM_BOUND, NUM_BOUND), DENOMINATOR)


def random_nonzero(rng: random.Random) -> Fraction:
    while True:
        x = random_rational(rng)
        if x:
            return x


def random_matrix(rng: random.Random, nrows: int, ncols: int) -> Matrix:
    return [[random_rational(rng) for _ in range(ncols)] for _ in range(nrows)]


def random_subspace(space: DecomposedSpace, dim: int, rng: random.Random, supported: bool = True) -> RationalSubspace:
    """Span of ``dim`` random vectors; with ``supported`` each lives on a random set of blocks.

    Random supports make projection dimensions vary from subset to subset,
    which a fully generic subspace would not.
    """
    n = space.ground.n
    rows = []
    for _ in range(dim):
        mask = rng.randint(1, space.ground.full) if supported else space.ground.full
        cols = set(space.columns(mask))
        rows.append([random_rational(rng) if c in cols else Fraction(0) for c in range(space.total)])
    return RationalSubspace(space, rows)


# flags -------------------------------------------------------------------------------

@dataclass(frozen=True)
class Flag:
    """A complete flag of U_I: F^i is cut out by the first i functionals."""

    mask: int
    functionals: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.functionals)
        if any(len(f) != n for f in self.functionals) or rank([list(f) for f in self.functionals]) != n:
            raise QLinAlgError("flag functionals must form an invertible square matrix")

    @property
    def length(self) -> int:
        return len(self.functionals)

    def equations(self, i: int) -> list[list[Fraction]]:
        if not 0 <= i <= self.length:
            raise QLinAlgError(f"flag step {i} outside 0..{self.length}")
        return [list(f) for f in self.functionals[:i]]


def random_flag(space: DecomposedSpace, mask: int, rng: random.Random) -> Flag:
    n = space.block_dim(mask)
    while True:
        M = random_matrix(rng, n, n)
        if rank(M) == n:
            return Flag(mask, tuple(tuple(r) for r in M))


@dataclass(frozen=True)
class FlagCut:
    flag: Flag
    step: int  # the exponent e: intersect with proj_I^{-1}(F^e)


def cut_by_flags(W: RationalSubspace, plan: Sequence[FlagCut]) -> RationalSubspace:
    out = W
    for fc in plan:
        out = out.cut_preimage(fc.flag.mask, fc.flag.equations(fc.step))
    return out


def counting(ground: GroundSet, J_seq: Sequence[int]) -> dict[int, int]:
    """epsilon_J: how many times each subset occurs in the sequence."""
    out: dict[int, int] = {}
    for J in J_seq:
        if J == 0:
            raise QLinAlgError("subsets in the sequence must be nonempty")
        out[J] = out.get(J, 0) + 1
    return out


def random_plan(W: RationalSubspace, J_seq: Sequence[int], rng: random.Random,
                max_flags: int = 2) -> list[FlagCut]:
    """For each subset I in the sequence, a few random flags with a random split of its count."""
    plan = []
    space = W.ambient
    for I, count in sorted(counting(space.ground, J_seq).items()):
        m = rng.randint(1, max_flags)
        parts = [0] * m
        for _ in range(count):
            parts[rng.randrange(m)] += 1
        for e in parts:
            flag = random_flag(space, I, rng)
            plan.append(FlagCut(flag, min(e, flag.length)))
    return plan


@dataclass
class Realization:
    space: RationalSubspace
    expected: SetFunction
    observed: SetFunction
    attempts: int
    seed: int
    codim: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "attempts": self.attempts,
            "dim": self.space.dim,
            "codim": self.codim,
            "expected": self.expected.to_json()["values"],
            "observed": self.observed.to_json()["values"],
            "ok": self.ok,
        }


def _nonnegative(f: SetFunction) -> bool:
    return all(v >= 0 for v in f.values)


def realize_upmin(W: RationalSubspace, J_seq: Sequence[int], seed: int = 0,
                  attempts: int = MAX_ATTEMPTS, max_flags: int = 2) -> Realization:
    """Cut W by random flags so that nu* becomes UpMin(nu*_W + xi_J).

    Raises :class:`PreconditionError` (with the blocks the cut space misses)
    when nu*_W + xi_J takes a negative value, and
    :class:`GeneralPositionError` when no draw realizes the transform.
    """
    ground = W.ambient.ground
    phi = nu_star(W)
    target = phi + xi_multi(ground, J_seq)
    if not _nonnegative(target):
        cut = cut_by_flags(W, random_plan(W, J_seq, make_rng(seed), max_flags))
        raise PreconditionError("nu* + xi takes a negative value", zero_blocks(cut))
    expected = upmin(target)
    for k in range(attempts):
        cut = cut_by_flags(W, random_plan(W, J_seq, make_rng(seed, k), max_flags))
        observed = nu_star(cut)
        if observed == expected:
            return Realization(cut, expected, observed, k + 1, seed, W.dim - cut.dim)
    raise GeneralPositionError(f"no flag draw realized UpMin after {attempts} attempts")


def dichotomy(W: RationalSubspace, J_seq: Sequence[int], seed: int = 0,
              attempts: int = MAX_ATTEMPTS) -> dict:
    """Which side of the nonnegativity dichotomy a flag cut lands on.

    When nu*_W + xi_J >= 0 the cut realizes the UpMin transform; otherwise
    some block projection of the cut vanishes. The report says which held.
    """
    try:
        r = realize_upmin(W, J_seq, seed, attempts)
        return {"nonnegative": True, "realized": r.ok, "zero_blocks": zero_blocks(r.space)}
    except PreconditionError as e:
        return {"nonnegative": False, "realized": False, "zero_blocks": e.zero_blocks}


# gluing hyperplanes ---------------------------------------------------------------------

@dataclass(frozen=True)
class GluePair:
    """A subset J and, per v in J, a functional cutting H_v in U_v (None when H_v = U_v)."""

    mask: int
    local: Mapping[int, tuple[Fraction, ...] | None]

    def __post_init__(self):
        if self.mask == 0:
            raise QLinAlgError("glue subsets must be nonempty")
        if set(self.local) != set(bits(self.mask)):
            raise QLinAlgError("one local functional (or None) per element of J is required")


def glue_functional(space: DecomposedSpace, pair: GluePair, rng: random.Random) -> list[Fraction]:
    """A general functional on U_J vanishing on the sum of the local H_v.

    The annihilator of that sum is spanned by the local functionals, so a
    random combination with nonzero weights is a general choice.
    """
    out: list[Fraction] = []
    nonzero = False
    for i in bits(pair.mask):
        f = pair.local[i]
        if f is None or not any(f):
            out += [Fraction(0)] * space.dims[i]
        else:
            c = random_nonzero(rng)
            out += [c * x for x in f]
            nonzero = True
    if not nonzero:
        raise DegenerateError("the local subspaces fill U_J; no hyperplane contains their sum")
    return out


def cut_local(W: RationalSubspace, pairs: Sequence[GluePair], choice: Sequence[int]) -> RationalSubspace:
    """W(S): W cut by proj_v^{-1}(H_{i,v}) for v in S_i (``choice`` holds the masks S_i)."""
    eqs = []
    for pair, S in zip(pairs, choice):
        for i in bits(S):
            f = pair.local[i]
            if f is not None:
                eqs.append(W.ambient.embed(1 << i, f))
    return W.cut(eqs)


def glue_hypothesis_failures(W: RationalSubspace, pairs: Sequence[GluePair]) -> list[tuple[int, ...]]:
    """Sub-selections S_i of J_i with nonnegative nu* + sum xi_v whose cut misses UpMin."""
    ground = W.ambient.ground
    phi = nu_star(W)
    subsets = [[S for S in range(pair.mask + 1) if S & pair.mask == S] for pair in pairs]
    bad = []
    for choice in product(*subsets):
        f = phi + xi_multi(ground, [1 << i for S in choice for i in bits(S)])
        if not _nonnegative(f):
            continue
        if nu_star(cut_local(W, pairs, choice)) != upmin(f):
            bad.append(tuple(choice))
    return bad


def cut_by_glue_hyperplanes(W: RationalSubspace, pairs: Sequence[GluePair], seed: int = 0,
                            attempts: int = MAX_ATTEMPTS, check_hypothesis: bool = True) -> Realization:
    """Cut W by general hyperplanes H_i of U_{J_i} containing the sum of the local H_{i,v}."""
    ground = W.ambient.ground
    J_seq = [p.mask for p in pairs]
    target = nu_star(W) + xi_multi(ground, J_seq)
    if not _nonnegative(target):
        raise PreconditionError("nu* + xi takes a negative value")
    if check_hypothesis:
        bad = glue_hypothesis_failures(W, pairs)
        if bad:
            raise QLinAlgError(f"local hyperplanes miss the UpMin transform on {len(bad)} sub-selections")
    expected = upmin(target)
    for k in range(attempts):
        rng = make_rng(seed, k)
        eqs = [W.ambient.embed(p.mask, glue_functional(W.ambient, p, rng)) for p in pairs]
        cut = W.cut(eqs)
        observed = nu_star(cut)
        if observed == expected:
            return Realization(cut, expected, observed, k + 1, seed, W.dim - cut.dim)
    raise GeneralPositionError(f"no hyperplane draw realized UpMin after {attempts} attempts")
