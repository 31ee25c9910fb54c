import random
from fractions import Fraction

import pytest

from artifact.bricks import enumerate_bricks, find_brick
from artifact.fans import (
    canonical_fan,
    enumerate_psl,
    fan_for_brick,
    ordered_partitions,
    pairs_at,
    psl_for_brick,
)
from artifact.cones import interior_membership
from artifact.setfn import is_simple
from artifact.verify import sigma_k4


@pytest.fixture(scope="module")
def k4_data(k4):
    return enumerate_psl(k4), enumerate_bricks(k4.vertices, k4.total_genus)


@pytest.fixture(scope="module")
def theta_data(theta):
    return enumerate_psl(theta), enumerate_bricks(theta.vertices, theta.total_genus)


def test_ordered_partitions_are_counted_by_fubini_numbers():
    for n, fubini in [(1, 1), (2, 3), (3, 13), (4, 75)]:
        parts = list(ordered_partitions([f"x{i}" for i in range(n)]))
        assert len(parts) == fubini
        assert len({tuple(map(frozenset, p)) for p in parts}) == fubini


def test_permissible_pairs_are_positive_and_simple(k4_data):
    psl, bricks = k4_data
    assert len(psl) == 29
    for p in psl:
        assert all(v > 0 for v in p.eta.values[1:]) and is_simple(p.eta)
        assert p.bricks
    assert {B.key for B in bricks} == {k for p in psl for k in p.bricks}


def test_extremal_fan_has_three_chambers(k4, k4_data):
    psl, bricks = k4_data
    fan = fan_for_brick(k4, find_brick(bricks, "B0"), psl)
    top = fan.maximal()
    assert len(top) == 3
    for i in (1, 2, 3):
        assert sum(fan.cones[j].equals(sigma_k4(k4, i)) for j in top) == 1


@pytest.mark.parametrize("name", ["k4", "theta"])
def test_one_pair_per_brick_at_generic_lengths(request, name):
    G = request.getfixturevalue(name)
    psl, bricks = request.getfixturevalue(f"{name}_data")
    rng = random.Random(name)
    for _ in range(15):
        ell = [Fraction(rng.randint(1, 10**4), rng.randint(1, 97)) for _ in G.edge_ids]
        hits = pairs_at(G, ell, psl)
        for B in bricks:
            assert sum(1 for p in psl_for_brick(psl, B) if interior_membership(p.cone, ell)) == 1
        assert hits == [p for p in psl if interior_membership(p.cone, ell)]


def test_canonical_fan_of_theta(theta, theta_data):
    psl, bricks = theta_data
    fan = canonical_fan(theta, psl, bricks)
    ones = [Fraction(1)] * len(theta.edge_ids)
    assert all(c.contains(ones) for c in fan.cones)
    assert max(fan.dims) == len(theta.edge_ids)
    js = fan.to_json()
    assert len(js["cones"]) == len(fan.cones)
