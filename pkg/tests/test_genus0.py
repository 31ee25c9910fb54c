import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.fixtures import load_graph
from artifact.genus0 import (
    DegeneratePencil,
    DifferentialModel,
    Genus0Error,
    MarkedConfig,
    QUARTIC_MONOMIALS,
    eta_hat_from_plus,
    line_basis,
    parse_quartic,
    poly_mul,
    quartic_for_rho,
    realize_pair,
    rho_from_quartic,
    series_quotient,
    taylor_shift,
)
from artifact.graph import Arrow, Multigraph, OrderedPartition, SlopeFunction
from artifact.qlinalg import nu_star
from artifact.residue import eta, eta_hat
from artifact.setfn import upmin
from artifact.verify import k4_negative_pair, k4_pair

points = st.fractions(min_value=-9, max_value=9, max_denominator=7)


def shifted(P, p):
    """Coefficients of P(p + w), by expanding every monomial with the binomial theorem."""
    out = [Fraction(0)] * len(P)
    for k, c in enumerate(P):
        for j in range(k + 1):
            out[j] += c * comb(k, j) * p ** (k - j)
    return out


def evaluate(P, z):
    return sum((c * z**k for k, c in enumerate(P)), Fraction(0))


@st.composite
def marked_lines(draw):
    k = draw(st.integers(2, 5))
    pts = draw(st.lists(points, min_size=k, max_size=k, unique=True))
    twists = [draw(st.integers(-2, 3)) for _ in range(k)]
    return tuple((Arrow(f"e{i}", 1), p, t) for i, (p, t) in enumerate(zip(pts, twists)))


@given(st.lists(points, min_size=1, max_size=6), points)
def test_taylor_shift_is_a_binomial_expansion(P, p):
    assert taylor_shift(P, p) == shifted(P, p)


@given(st.lists(points, min_size=1, max_size=5), st.lists(points, min_size=1, max_size=4))
def test_series_quotient_inverts_multiplication(A, B):
    if B[0] == 0:
        return
    n = 6
    Q = series_quotient(A, B, n)
    prod = poly_mul(Q, B)
    padded = A + [Fraction(0)] * n
    assert prod[:n] == padded[:n]


@given(marked_lines())
def test_basis_size_and_residue_theorem(marks):
    poles = sum(max(0, t) for _, _, t in marks)
    zeros = sum(max(0, -t) for _, _, t in marks)
    basis = line_basis("v", marks)
    assert len(basis) == max(0, poles - zeros - 1)
    for om in basis:
        assert sum(om.residue(a) for a, _, _ in marks) == 0
        for a, p, t in marks:
            if t < 0:
                assert evaluate(list(om.numerator), p) == 0


@given(marked_lines())
def test_laurent_coefficients_solve_the_defining_identity(marks):
    basis = line_basis("v", marks)
    for om in basis[:2]:
        for a, p, t in marks:
            m = max(0, t)
            rest = [Fraction(1)]
            for b, pb, tb in marks:
                if b != a:
                    for _ in range(max(0, tb)):
                        rest = poly_mul(rest, [-pb, Fraction(1)])
            K = 4
            series = [om.laurent(a, j - m) for j in range(K)]  # coefficients of w^(j - m) times w^m
            lhs = poly_mul(series, shifted(rest, p))[:K]
            rhs = (shifted(list(om.numerator), p) + [Fraction(0)] * K)[:K]
            assert lhs == rhs
            if t == 1:
                direct = evaluate(list(om.numerator), p) / evaluate(rest, p)
                assert om.residue(a) == direct


def test_guards(k4):
    tree = Multigraph(["a", "b"], [("e", ("a", "b"))])
    cfg = MarkedConfig.random(tree, 0)
    with pytest.raises(Genus0Error, match="genus 0"):
        DifferentialModel(cfg, SlopeFunction.zero(tree), OrderedPartition.trivial(tree))
    with pytest.raises(Genus0Error):
        MarkedConfig.random(Multigraph(["a"], [("l", ("a", "a"))], {"a": 1}), 0)
    pair = k4_pair(k4)
    model = DifferentialModel(MarkedConfig.random(k4, 0), pair.s, pair.pi)
    with pytest.raises(Genus0Error, match="zero"):
        model.gluing_equations({e: Fraction(0) for e in k4.edge_ids})
    pts = {a: Fraction(1) for a in k4.arrows}
    with pytest.raises(Genus0Error, match="coincide"):
        MarkedConfig(k4, pts)


def test_config_json_roundtrip(k4):
    cfg = MarkedConfig.random(k4, 5)
    assert MarkedConfig.from_json(k4, cfg.to_json()) == cfg


@pytest.mark.parametrize("seed", range(4))
def test_two_level_pair_realizes(k4, seed):
    pair = k4_pair(k4)
    rho = {e: Fraction(seed + 2, 3) for e in k4.edge_ids}
    rep = realize_pair(k4, pair.s, pair.pi, rho, seed=seed)
    assert rep.ok, rep.problems
    assert rep.w_hat.dim == 3 + 1 and rep.w_exp.dim == 3
    assert nu_star(rep.w_exp) == upmin(eta(k4, pair.pi, pair.s))
    assert nu_star(rep.w_hat) == upmin(eta_hat(k4, pair.pi, pair.s))
    assert eta_hat_from_plus(rep.config, pair.s, pair.pi) == eta_hat(k4, pair.pi, pair.s)


def test_rescaled_parameters_give_the_same_space(k4):
    pair = k4_pair(k4)
    cfg = MarkedConfig.random(k4, 11)
    model = DifferentialModel(cfg, pair.s, pair.pi)
    rng = random.Random(3)
    scales = {a: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for a in k4.arrows}
    rho = {e: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for e in k4.edge_ids}
    moved = {e: rho[e] * scales[Arrow(e, 1)] * scales[Arrow(e, -1)] for e in k4.edge_ids}
    assert model.w_exp(moved, scales) == model.w_exp(rho)


def test_negative_eta_loses_a_block(k4):
    pair = k4_negative_pair(k4)
    assert min(eta(k4, pair.pi, pair.s).values) < 0
    rep = realize_pair(k4, pair.s, pair.pi, seed=1)
    nu = nu_star(rep.w_exp)
    assert any(nu[1 << i] == 0 for i in range(k4.n))


def test_quartic_leading_coefficients():
    coeffs = parse_quartic({"a_400": "1", "a_040": "1", "a_004": "1"})
    rho = rho_from_quartic(coeffs)
    assert [rho[p] for p in sorted(rho)] == [2, 2, 2, 1, 1, 1]
    with pytest.raises(DegeneratePencil):
        rho_from_quartic(parse_quartic({"a_400": 1}))
    with pytest.raises(Genus0Error):
        parse_quartic({"a_310x": 1})
    assert parse_quartic({"a_3,1,0": "2/3"})[(3, 1, 0)] == Fraction(2, 3)
    assert len(QUARTIC_MONOMIALS) == 15


@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(bool), min_size=6, max_size=6))
def test_every_rho_comes_from_a_quartic(vals):
    target = dict(zip([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], vals))
    coeffs = quartic_for_rho(target)
    assert coeffs is not None
    assert rho_from_quartic(coeffs) == target
