from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.rational import det, fmt, inverse, matvec, nullspace, q, rank, rref, solve

from conftest import small_fractions

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(small_fractions, min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def test_q_accepts_exact_inputs_only():
    assert q("3/6") == Fraction(1, 2)
    assert q(4) == Fraction(4)
    with pytest.raises(TypeError):
        q(0.5)
    with pytest.raises(TypeError):
        q(True)


def test_fmt_writes_integers_without_denominator():
    assert fmt(Fraction(3)) == "3"
    assert fmt(Fraction(-2, 4)) == "-1/2"


@given(matrices)
def test_rank_nullity(M):
    n = len(M[0])
    K = nullspace(M, n)
    assert rank(M) + len(K) == n
    for v in K:
        assert all(x == 0 for x in matvec(M, v))


@given(matrices)
def test_rref_preserves_row_space(M):
    R, pivots = rref(M)
    assert rank(R + M) == rank(M) == len(pivots)
    for i, p in enumerate(pivots):
        assert R[i][p] == 1
        assert all(R[k][p] == 0 for k in range(len(R)) if k != i)


@given(matrices, st.data())
def test_solve_returns_a_solution_when_one_exists(M, data):
    x0 = data.draw(st.lists(small_fractions, min_size=len(M[0]), max_size=len(M[0])))
    b = matvec(M, x0)
    x = solve(M, b)
    assert x is not None and matvec(M, x) == b


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small_fractions, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_and_determinant(M):
    n = len(M)
    inv = inverse(M)
    if det(M) == 0:
        assert inv is None
        assert rank(M) < n
    else:
        ident = [[sum(M[i][k] * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        assert ident == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
