"""The exact simplex against a brute-force vertex enumeration on small bounded problems."""

from fractions import Fraction
from itertools import combinations

from hypothesis import given
from hypothesis import strategies as st

from artifact import lp
from artifact.rational import solve

from conftest import small_fractions


def brute_max(c, A, b):
    """Best objective over all basic feasible points of {A x <= b}; the region is bounded by a box."""
    n = len(c)
    best = None
    for rows in combinations(range(len(A)), n):
        M = [A[i] for i in rows]
        x = solve(M, [b[i] for i in rows])
        if x is None or any(sum(a * y for a, y in zip(A[i], x)) > b[i] for i in range(len(A))):
            continue
        val = sum(ci * xi for ci, xi in zip(c, x))
        best = val if best is None or val > best else best
    return best


@st.composite
def boxed_lps(draw):
    n = draw(st.integers(1, 3))
    A, b = [], []
    for i in range(n):
        unit = [Fraction(int(i == j)) for j in range(n)]
        A += [unit, [-x for x in unit]]
        b += [Fraction(draw(st.integers(0, 5))), Fraction(draw(st.integers(0, 5)))]
    for _ in range(draw(st.integers(0, 3))):
        A.append(draw(st.lists(small_fractions, min_size=n, max_size=n)))
        b.append(draw(small_fractions))
    c = draw(st.lists(small_fractions, min_size=n, max_size=n))
    return c, A, b


@given(boxed_lps())
def test_maximize_matches_vertex_enumeration(problem):
    c, A, b = problem
    res = lp.maximize(c, A, b)
    want = brute_max(c, A, b)
    if want is None:
        assert res.status == "infeasible"
    else:
        assert res.optimal and res.value == want
        assert all(sum(a * x for a, x in zip(row, res.x)) <= bi for row, bi in zip(A, b))


def test_unbounded_and_equalities():
    assert lp.maximize([1, 0], [[0, 1]], [1]).status == "unbounded"
    res = lp.maximize([1, 1], [], [], [[1, 2]], [4], nonneg=True)
    assert res.optimal and res.value == 4


def test_feasible_returns_a_point():
    x = lp.feasible([[1, 1], [-1, 0], [0, -1]], [2, 0, 0])
    assert x is not None and x[0] + x[1] <= 2 and min(x) >= 0
    assert lp.feasible([[1], [-1]], [0, -1]) is None
