import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.bricks import (
    BrickError,
    BrickOverflow,
    brick_of,
    contains_brick,
    contains_brick_lp,
    enumerate_bricks,
    extremal_brick,
    find_brick,
    simplex_volume,
    volume,
)
from artifact.setfn import GroundSet, is_submodular, upmin

from conftest import submodular_functions

GROUNDS = {n: GroundSet(tuple(f"x{i}" for i in range(n))) for n in range(1, 5)}


def random_simplex_point(rng: random.Random, n: int, g: int) -> tuple[Fraction, ...]:
    cuts = sorted(Fraction(rng.randint(1, 10**6 - 1), 10**6) * g for _ in range(n - 1))
    pts = [Fraction(0)] + cuts + [Fraction(g)]
    return tuple(b - a for a, b in zip(pts, pts[1:]))


@pytest.mark.parametrize("n,g", [(1, 2), (2, 1), (2, 3), (3, 1), (3, 2), (3, 3), (4, 2)])
def test_bricks_tile_the_simplex(n, g):
    bricks = enumerate_bricks(GROUNDS[n], g)
    assert sum(volume(B) for B in bricks) == simplex_volume(n, g)
    assert len({B.floors for B in bricks}) == len(bricks)
    for B in bricks:
        again = brick_of(B.ground, g, B.witness)
        assert again.floors == B.floors and again.full_dimensional
        assert B.hrep().contains(B.witness)


@pytest.mark.parametrize("n,g", [(2, 3), (3, 3), (4, 2)])
def test_sampled_generic_points_land_in_enumerated_bricks(n, g):
    known = {B.floors for B in enumerate_bricks(GROUNDS[n], g)}
    rng = random.Random(f"{n}/{g}")
    seen = set()
    for _ in range(300):
        B = brick_of(GROUNDS[n], g, random_simplex_point(rng, n, g))
        if B.full_dimensional:
            assert B.floors in known
            seen.add(B.floors)
    assert seen


def test_interval_bricks():
    bricks = enumerate_bricks(GROUNDS[2], 4)
    assert len(bricks) == 4
    assert sorted(B.floors[1] for B in bricks) == [0, 1, 2, 3]


@given(submodular_functions(max_n=3))
def test_containment_matches_lp(f):
    chi = upmin(f)
    if min(chi.values) < 0 or chi.range < 1 or chi.range > 4 or not is_submodular(chi):
        return
    g = int(chi.range)
    for B in enumerate_bricks(chi.ground, g):
        assert contains_brick(chi, B) == contains_brick_lp(chi, B)


def test_names_and_guards():
    bricks = enumerate_bricks(GROUNDS[3], 3)
    assert find_brick(bricks, "B1").floors == extremal_brick(GROUNDS[3], 3, 1).floors
    assert find_brick(bricks, bricks[2].key) == bricks[2]
    with pytest.raises(BrickError):
        find_brick(bricks, "B7")
    with pytest.raises(BrickError):
        find_brick(bricks, "nope")
    with pytest.raises(BrickOverflow):
        enumerate_bricks(GROUNDS[3], 3, cap=2)
    with pytest.raises(BrickError):
        brick_of(GROUNDS[2], 2, (Fraction(3), Fraction(-1)))
    assert not brick_of(GROUNDS[2], 2, (Fraction(1), Fraction(1))).full_dimensional
