import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.qlinalg import (
    DecomposedSpace,
    Flag,
    GluePair,
    PreconditionError,
    QLinAlgError,
    RationalSubspace,
    cut_by_glue_hyperplanes,
    dichotomy,
    nu_star,
    random_rational,
    random_subspace,
    realize_upmin,
    zero_blocks,
)
from artifact.setfn import is_nondecreasing, is_submodular, upmin, xi_multi


@st.composite
def subspaces(draw, max_blocks: int = 3, max_dim: int = 3):
    n = draw(st.integers(1, max_blocks))
    dims = [draw(st.integers(0, max_dim)) for _ in range(n)]
    sp = DecomposedSpace.of([f"v{i}" for i in range(n)], dims)
    rng = random.Random(draw(st.integers(0, 10**6)))
    return random_subspace(sp, draw(st.integers(0, sp.total)), rng)


@given(subspaces())
def test_nu_star_by_kernels(W):
    """dim proj_I(W) = dim W - dim(W meets the kernel of proj_I)."""
    sp = W.ambient
    nu = nu_star(W)
    for I in sp.ground.subsets():
        eqs = [[Fraction(int(c == k)) for c in range(sp.total)] for k in sp.columns(I)]
        assert nu[I] == W.dim - W.cut(eqs).dim
    assert is_submodular(nu) and is_nondecreasing(nu)


@given(subspaces(), st.data())
def test_flag_cuts_realize_upmin_or_lose_a_block(W, data):
    Js = data.draw(st.lists(st.integers(1, W.ambient.ground.full), max_size=3))
    seed = data.draw(st.integers(0, 1000))
    d = dichotomy(W, Js, seed)
    target = nu_star(W) + xi_multi(W.ambient.ground, Js)
    if min(target.values) >= 0:
        assert d["nonnegative"] and d["realized"]
        r = realize_upmin(W, Js, seed)
        assert nu_star(r.space) == upmin(target)
        assert r.space.issubspace(W)
    else:
        assert not d["nonnegative"] and d["zero_blocks"]


def test_negative_precondition_names_blocks():
    sp = DecomposedSpace.of(["a", "b"], [1, 1])
    W = RationalSubspace(sp, [[1, 1]])
    with pytest.raises(PreconditionError) as err:
        realize_upmin(W, [0b01, 0b01])
    assert "a" in err.value.zero_blocks


@given(st.integers(0, 10**6))
def test_glue_hyperplanes(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    dims = [rng.randint(1, 3) for _ in range(n)]
    sp = DecomposedSpace.of([f"v{i}" for i in range(n)], dims)
    W = random_subspace(sp, rng.randint(1, sp.total), rng)
    J = rng.randint(1, sp.ground.full)
    pair = GluePair(J, {i: tuple(random_rational(rng) for _ in range(dims[i])) for i in range(n) if J >> i & 1})
    target = nu_star(W) + xi_multi(sp.ground, [J])
    if min(target.values) < 0:
        with pytest.raises(PreconditionError):
            cut_by_glue_hyperplanes(W, [pair], seed)
        return
    r = cut_by_glue_hyperplanes(W, [pair], seed)
    assert r.ok and nu_star(r.space) == upmin(target)


def test_guards():
    sp = DecomposedSpace.of(["a"], [2])
    with pytest.raises(QLinAlgError):
        RationalSubspace(sp, [[1, 2, 3]])
    with pytest.raises(QLinAlgError):
        Flag(1, ((Fraction(1), Fraction(0)), (Fraction(2), Fraction(0))))
    with pytest.raises(QLinAlgError):
        GluePair(0, {})
    with pytest.raises(QLinAlgError):
        DecomposedSpace.of(["a", "b"], [1])
    assert zero_blocks(RationalSubspace(sp, [])) == ["a"]
