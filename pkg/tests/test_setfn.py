from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import lp
from artifact.setfn import (
    GroundSet,
    SetFunction,
    SetFunctionError,
    adjoint,
    downsum,
    is_nondecreasing,
    is_simple,
    is_submodular,
    is_supermodular,
    modular,
    polytope_contains,
    polytope_hrep,
    upmin,
    xi_multi,
    xi_of,
)

from conftest import set_functions, submodular_functions


def submodular_by_definition(f: SetFunction) -> bool:
    v = f.values
    subsets = range(1 << f.ground.n)
    return all(v[I] + v[J] >= v[I | J] + v[I & J] for I in subsets for J in subsets)


def upmin_by_definition(f: SetFunction) -> list[Fraction]:
    full = f.ground.full
    return [Fraction(0)] + [min(f.values[K] for K in range(full + 1) if K & I == I) for I in range(1, full + 1)]


@given(set_functions())
def test_submodularity_matches_the_lattice_inequality(f):
    assert is_submodular(f) == submodular_by_definition(f)
    assert is_supermodular(f) == submodular_by_definition(-f)


@given(set_functions())
def test_upmin_is_the_superset_minimum(f):
    chi = upmin(f)
    assert list(chi.values) == upmin_by_definition(f)
    full = f.ground.full
    assert all(chi[I] <= chi[J] for I in range(1, full + 1) for J in range(I, full + 1) if J & I == I)
    assert is_nondecreasing(chi) == (min(chi.values) >= 0)
    assert upmin(chi) == chi
    assert chi.range == f.range


@given(submodular_functions())
def test_upmin_keeps_submodularity(f):
    """The empty set is pinned to 0, so this needs UpMin(f) nonnegative."""
    assert is_submodular(f)
    chi = upmin(f)
    if min(chi.values) >= 0:
        assert is_submodular(chi)


@given(submodular_functions())
def test_upmin_polytope_is_the_nonnegative_part(f):
    """Maximising q(I) over the base polytope intersected with the orthant gives UpMin(f)(I)."""
    A_ub, b_ub, A_eq, b_eq = polytope_hrep(f).matrices()
    chi = upmin(f)
    feasible = lp.feasible(list(A_ub) + [[-Fraction(int(i == j)) for j in range(f.ground.n)] for i in range(f.ground.n)],
                           list(b_ub) + [0] * f.ground.n, A_eq, b_eq)
    assert (feasible is not None) == (min(chi.values) >= 0)
    if feasible is None:
        return
    for I in range(1, f.ground.full):
        row = [Fraction(I >> i & 1) for i in range(f.ground.n)]
        assert lp.maximize(row, A_ub, b_ub, A_eq, b_eq, nonneg=True).value == chi[I]


@given(set_functions())
def test_adjoint_is_an_involution(f):
    assert adjoint(adjoint(f)) == f
    assert is_submodular(f) == is_supermodular(adjoint(f))


@given(set_functions())
def test_downsum_inverts_by_moebius(f):
    n = f.ground.n
    mob = [sum((-1) ** bin(I ^ J).count("1") * f.values[J] for J in range(1 << n) if J & I == J) for I in range(1 << n)]
    assert downsum(SetFunction(f.ground, mob)) == f


@given(st.integers(1, 5), st.data())
def test_modular_functions(n, data):
    ground = GroundSet(tuple(f"x{i}" for i in range(n)))
    w = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    m = modular(ground, w)
    assert m.is_modular() and is_submodular(m) and is_supermodular(m)


def test_xi_values():
    ground = GroundSet(("a", "b", "c"))
    xi = xi_of(ground, ["a", "b"])
    assert xi(["a", "b"]) == -1 and xi(["a", "b", "c"]) == -1 and xi(["a"]) == 0
    assert xi_multi(ground, [0b011, 0b011]) == xi.scale(2)
    with pytest.raises(SetFunctionError):
        xi_of(ground, 0)


def test_simple_means_strict_bipartitions():
    ground = GroundSet(("a", "b"))
    assert is_simple(SetFunction(ground, [0, 1, 1, 1]))
    assert not is_simple(SetFunction(ground, [0, 1, 0, 1]))


def test_json_roundtrip_and_errors():
    ground = GroundSet(("a", "b"))
    f = SetFunction(ground, [0, Fraction(1, 2), 2, 3])
    assert SetFunction.from_json(f.to_json()) == f
    with pytest.raises(SetFunctionError):
        SetFunction.from_json({"ground": ["a", "b"], "values": {"a": "1", "b": "1"}})
    with pytest.raises(SetFunctionError):
        SetFunction(ground, [1, 0, 0, 0])
    with pytest.raises(SetFunctionError):
        polytope_hrep(SetFunction(ground, [0, 0, 0, 1]))


@given(submodular_functions(max_n=3), st.data())
def test_polytope_membership_agrees_with_rows(f, data):
    n = f.ground.n
    p = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    assert polytope_contains(f, p) == polytope_hrep(f).contains([Fraction(x) for x in p])
