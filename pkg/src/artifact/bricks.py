"""Bricks of the simplex {q >= 0, q(V) = g}.

A generic point beta of the simplex defines the brick of points q with
floor(beta(S)) <= q(S) <= ceil(beta(S)) for every subset S. Bricks are the
closed regions of the arrangement of walls q(S) = k, 0 < k < g, and a brick is
identified by its floor table S -> floor(beta(S)).

Geometry happens in projected coordinates: the last coordinate is dropped,
so a wall for S is written through whichever of S and its complement avoids
the last element.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial, floor
from typing import Iterator, Sequence

from . import lp
from .rational import det, fmt, inverse, q, rank
from .setfn import GroundSet, PolytopeH, SetFunction, SetFunctionError, bits


class BrickError(ValueError):
    pass


class BrickOverflow(RuntimeError):
    pass


MAX_N = 6
MAX_G = 6


@dataclass(frozen=True)
class Brick:
    ground: GroundSet
    g: int
    floors: tuple[int, ...]  # indexed by subset mask
    witness: tuple[Fraction, ...]
    full_dimensional: bool = True

    @property
    def key(self) -> str:
        """Floors of the proper nonempty subsets, in mask order."""
        return ".".join(str(x) for x in self.floors[1:-1])

    def floor(self, mask: int) -> int:
        return self.floors[mask]

    def ceil(self, mask: int) -> int:
        full = self.ground.full
        return self.floors[mask] if mask in (0, full) else self.floors[mask] + 1

    def hrep(self) -> PolytopeH:
        """Full-coordinate H-representation (as a base-polytope style PolytopeH)."""
        n = self.ground.n
        ineqs = []
        for m in range(1, self.ground.full):
            row = tuple(Fraction(m >> i & 1) for i in range(n))
            ineqs.append((row, Fraction(self.ceil(m))))
            ineqs.append((tuple(-x for x in row), Fraction(-self.floors[m])))
        eq = ((tuple(Fraction(1) for _ in range(n)), Fraction(self.g)),)
        return PolytopeH(self.ground, tuple(ineqs), eq)

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "g": self.g,
            "floors": {self.ground.key(m): self.floors[m] for m in range(1, self.ground.full)},
            "witness": [fmt(x) for x in self.witness],
        }


def subset_sums(beta: Sequence[Fraction]) -> list[Fraction]:
    n = len(beta)
    sums = [Fraction(0)] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        sums[m] = sums[m ^ low] + beta[low.bit_length() - 1]
    return sums


def brick_of(ground: GroundSet, g: int, beta: Sequence) -> Brick:
    b = tuple(q(x) for x in beta)
    if len(b) != ground.n:
        raise BrickError("point has the wrong number of coordinates")
    if any(x < 0 for x in b) or sum(b) != g:
        raise BrickError("point is not in the simplex")
    sums = subset_sums(b)
    floors = tuple(floor(x) for x in sums)
    full = ground.full
    generic = all(sums[m].denominator != 1 for m in range(1, full))
    return Brick(ground, g, floors, b, generic)


# projected geometry ---------------------------------------------------------------

def _rep_masks(n: int) -> list[int]:
    """Nonempty subsets avoiding the last element: one per complementary pair."""
    return list(range(1, 1 << (n - 1)))


def _proj_row(m: int, d: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(m >> i & 1) for i in range(d))


@lru_cache(maxsize=None)
def _bases(n: int) -> tuple[tuple[tuple[int, ...], tuple[tuple[int, ...], ...], int], ...]:
    """Every (n-1)-set of independent wall directions, with an integer inverse.

    Each entry is (masks, A, D) where A / D is the inverse matrix and D > 0,
    so a vertex is an integer vector over the common denominator D.
    """
    d = n - 1
    reps = _rep_masks(n)
    out = []
    for combo in combinations(reps, d):
        M = [list(_proj_row(m, d)) for m in combo]
        inv = inverse(M)
        if inv is not None:
            D = abs(det(M)).numerator
            A = tuple(tuple(int(x * D) for x in r) for r in inv)
            out.append((combo, A, D))
    return tuple(out)


def _proj_constraints(B: Brick) -> list[tuple[tuple[Fraction, ...], Fraction, tuple[int, int]]]:
    """Rows a.x <= b in projected coordinates, tagged (mask, side) with side +1 upper, -1 lower."""
    n = B.ground.n
    d = n - 1
    rows = []
    for m in _rep_masks(n):
        r = _proj_row(m, d)
        rows.append((r, Fraction(B.floors[m] + 1), (m, 1)))
        rows.append((tuple(-x for x in r), Fraction(-B.floors[m]), (m, -1)))
    return rows


def projected_vertices(B: Brick) -> list[tuple[Fraction, ...]]:
    """Vertices in the first n-1 coordinates: solve every choice of n-1 tight walls, keep the feasible points.

    The work is done in integers over the common denominator of each basis;
    feasibility of a point is read off its subset sums.
    """
    n = B.ground.n
    d = n - 1
    if d == 0:
        return [()]
    reps = _rep_masks(n)
    fl = B.floors
    out = set()
    for combo, A, D in _bases(n):
        lows = [fl[m] * D for m in reps]
        for sides in product((0, 1), repeat=d):
            rhs = [fl[m] + s for m, s in zip(combo, sides)]
            X = [sum(a * b for a, b in zip(row, rhs)) for row in A]
            sums = [0] * (1 << d)
            ok = True
            for m in reps:
                low = m & -m
                sums[m] = sums[m ^ low] + X[low.bit_length() - 1]
                lo = lows[m - 1]
                if not lo <= sums[m] <= lo + D:
                    ok = False
                    break
            if ok:
                out.add(tuple(Fraction(x, D) for x in X))
    return sorted(out)


def lift(B: Brick, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x) + (B.g - sum(x, Fraction(0)),)


def _affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def facet_walls(B: Brick, verts: Sequence[Sequence[Fraction]] | None = None) -> list[tuple[int, int]]:
    """Walls (mask, side) supporting a facet of the brick."""
    n = B.ground.n
    d = n - 1
    if verts is None:
        verts = projected_vertices(B)
    out = []
    for r, c, tag in _proj_constraints(B):
        tight = [v for v in verts if sum((a * b for a, b in zip(r, v)), Fraction(0)) == c]
        if len(tight) >= d and _affine_rank(tight) == d - 1:
            out.append(tag)
    return out


def polytope_volume(verts: Sequence[Sequence[Fraction]], rows: Sequence[tuple[Sequence[Fraction], Fraction]]) -> Fraction:
    """Exact volume of a full-dimensional polytope from its vertices and inequalities.

    Pyramid decomposition from the first vertex: each facet F not containing
    it contributes (b - a.p0) * vol'(F) / (d |a_j|), where vol' is the volume
    of F projected along a coordinate j with a_j != 0. The projection keeps the
    recursion inside rational arithmetic.
    """
    verts = [tuple(v) for v in verts]
    if not verts:
        return Fraction(0)
    d = len(verts[0])
    if d == 0:
        return Fraction(1)
    if d == 1:
        xs = [v[0] for v in verts]
        return max(xs) - min(xs)
    p0 = verts[0]
    seen: set[frozenset[int]] = set()
    total = Fraction(0)
    for a, b in rows:
        a = tuple(a)
        tight = frozenset(i for i, v in enumerate(verts) if sum((x * y for x, y in zip(a, v)), Fraction(0)) == b)
        if len(tight) < d or tight in seen or 0 in tight:
            continue
        pts = [verts[i] for i in sorted(tight)]
        if _affine_rank(pts) != d - 1:
            continue
        seen.add(tight)
        j = next(i for i, x in enumerate(a) if x != 0)
        # substitute x_j = (b - sum_{i != j} a_i x_i) / a_j into the other rows
        sub_rows = []
        for a2, b2 in rows:
            a2 = tuple(a2)
            f = a2[j] / a[j]
            na = tuple(a2[i] - f * a[i] for i in range(d) if i != j)
            nb = b2 - f * b
            if any(na):
                sub_rows.append((na, nb))
        sub_verts = [tuple(v[i] for i in range(d) if i != j) for v in pts]
        height = b - sum((x * y for x, y in zip(a, p0)), Fraction(0))
        total += height * polytope_volume(sub_verts, sub_rows) / (d * abs(a[j]))
    return total


def volume(B: Brick) -> Fraction:
    """Volume of the brick in projected coordinates."""
    verts = projected_vertices(B)
    if B.ground.n == 1:
        return Fraction(1)
    return polytope_volume(verts, [(r, c) for r, c, _ in _proj_constraints(B)])


def simplex_volume(n: int, g: int) -> Fraction:
    return Fraction(g ** (n - 1), factorial(n - 1))


def centroid_witness(B: Brick, verts: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    k = len(verts)
    d = B.ground.n - 1
    c = tuple(sum((v[i] for v in verts), Fraction(0)) / k for i in range(d))
    return lift(B, c)


def seed_point(n: int, g: int, top: int = 0) -> tuple[Fraction, ...]:
    """A generic point near the vertex g*e_top of the simplex.

    The small coordinates are 2^i / D with D = 2^(n+1) + 1 odd, so no
    nonempty subset sum of them (or its complement to g) is an integer.
    """
    D = (1 << (n + 1)) + 1
    eps = [Fraction(1 << i, D) for i in range(n - 1)]
    out = []
    k = 0
    for i in range(n):
        if i == top:
            out.append(None)
        else:
            out.append(eps[k])
            k += 1
    rest = g - sum(eps, Fraction(0))
    return tuple(rest if x is None else x for x in out)


def _neighbor_floors(B: Brick, mask: int, side: int) -> tuple[int, ...]:
    full = B.ground.full
    fl = list(B.floors)
    fl[mask] += side
    fl[full ^ mask] = B.g - 1 - fl[mask]
    return tuple(fl)


def enumerate_bricks(ground: GroundSet, g: int, cap: int = 100_000) -> list[Brick]:
    """All full-dimensional bricks, by walking across interior walls."""
    n = ground.n
    if n > MAX_N or g > MAX_G:
        raise BrickError(f"brick enumeration is limited to n <= {MAX_N}, g <= {MAX_G}")
    if g < 1:
        raise BrickError("the simplex must have positive size")
    if n == 1:
        return [brick_of(ground, g, (g,))]
    start = brick_of(ground, g, seed_point(n, g))
    seen = {start.floors: start}
    order = [start]
    todo = deque([start])
    while todo:
        B = todo.popleft()
        verts = projected_vertices(B)
        for mask, side in facet_walls(B, verts):
            level = B.floors[mask] + (1 if side > 0 else 0)
            if not 0 < level < g:
                continue
            fl = _neighbor_floors(B, mask, side)
            if fl in seen:
                continue
            stub = Brick(ground, g, fl, ())
            wv = projected_vertices(stub)
            wit = centroid_witness(stub, wv)
            nb = brick_of(ground, g, wit)
            if nb.floors != fl or not nb.full_dimensional:
                raise BrickError("centroid witness does not reproduce the floor table")
            seen[fl] = nb
            order.append(nb)
            todo.append(nb)
            if len(order) > cap:
                raise BrickOverflow(f"more than {cap} bricks")
    # replace the seed's witness by its centroid too, for uniformity
    sv = projected_vertices(start)
    order[0] = brick_of(ground, g, centroid_witness(start, sv))
    return order


def extremal_brick(ground: GroundSet, g: int, top: int) -> Brick:
    """The brick containing points arbitrarily close to the vertex g*e_top."""
    return brick_of(ground, g, seed_point(ground.n, g, top))


def contains_brick(chi: SetFunction, B: Brick) -> bool:
    """Does the base polytope of chi contain the brick? Needs chi integral."""
    if chi.range != B.g:
        raise BrickError("set function range differs from the brick's simplex size")
    if any(v.denominator != 1 for v in chi.values):
        raise BrickError("brick containment by ceilings needs an integer-valued function")
    full = B.ground.full
    return all(B.ceil(m) <= chi[m] for m in range(1, full))


def contains_brick_lp(chi: SetFunction, B: Brick) -> bool:
    """LP oracle: max of q(S) over the brick is at most chi(S) for every S."""
    A_ub, b_ub, A_eq, b_eq = B.hrep().matrices()
    n = B.ground.n
    for m in range(1, B.ground.full):
        row = [Fraction(m >> i & 1) for i in range(n)]
        res = lp.maximize(row, A_ub, b_ub, A_eq, b_eq)
        if res.value > chi[m]:
            return False
    return chi.range == B.g


def find_brick(bricks: Sequence[Brick], name: str) -> Brick:
    """Look up a brick by floor key or by 'B<i>', the extremal brick at vertex i."""
    for B in bricks:
        if B.key == name:
            return B
    if name.startswith("B") and name[1:].isdigit() and bricks:
        i = int(name[1:])
        ground, g = bricks[0].ground, bricks[0].g
        if i >= ground.n:
            raise BrickError(f"no vertex {i} in a ground set of size {ground.n}")
        target = extremal_brick(ground, g, i).floors
        for B in bricks:
            if B.floors == target:
                return B
    raise BrickError(f"unknown brick {name!r}")
