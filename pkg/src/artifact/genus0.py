"""Differentials on nodal curves whose components are all projective lines.

Each component carries the affine coordinate z and one marked point p^a for
every arrow a leaving its vertex. A section of omega(sum t_a p^a) is
f(z) dz with f = N(z) / prod (z - p^a)^max(0, t_a), where N vanishes to order
-t_a at every point with t_a < 0 and has degree at most sum max(0, t_a) - 2,
so that nothing happens at infinity. Laurent coefficients at a marked point
come from a Taylor shift followed by power-series division.

On top of these bases, the residue conditions, the Rosenlicht conditions and
the gluing of leading coefficients at integer nodes become linear equations,
and the spaces W-hat, W-hat-plus and W-exp are their exact kernels.

Conventions: the local parameter at p^a is (z - p^a), optionally rescaled by
a per-arrow constant c; a section of omega(t p) is trivialized at p by
(z - p)^(-t) dz. The gluing at an integer upward arrow a = uv over e is the
row -rho_e^(-s(a)) * lc(omega_u, a) + lc(omega_v, rev a) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .graph import Arrow, GraphError, Multigraph, OrderedPartition, SlopeFunction, is_slope_level_pair, slope_sets
from .qlinalg import DecomposedSpace, RationalSubspace, make_rng, nu_star, random_nonzero
from .rational import Matrix, fmt, q, solve
from .residue import eta, eta_hat, residue_conditions
from .setfn import SetFunction, upmin

Poly = list[Fraction]  # coefficients, lowest degree first


class Genus0Error(ValueError):
    pass


class DegeneratePencil(Genus0Error):
    pass


# polynomials -----------------------------------------------------------------------------

def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_power_linear(p: Fraction, k: int) -> Poly:
    """(z - p)^k for k >= 0."""
    out: Poly = [Fraction(1)]
    for _ in range(k):
        out = poly_mul(out, [-p, Fraction(1)])
    return out


def taylor_shift(P: Sequence[Fraction], p: Fraction) -> Poly:
    """Coefficients of P(p + w) in w (synthetic division, repeated)."""
    c = list(P)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += p * c[j + 1]
    return c


def series_quotient(A: Sequence[Fraction], B: Sequence[Fraction], n: int) -> Poly:
    """First n power-series coefficients of A / B (B[0] nonzero)."""
    if not B or B[0] == 0:
        raise Genus0Error("power-series division by a series with zero constant term")
    out: Poly = []
    for k in range(n):
        acc = A[k] if k < len(A) else Fraction(0)
        for j in range(1, min(k, len(B) - 1) + 1):
            acc -= B[j] * out[k - j]
        out.append(acc / B[0])
    return out


# configurations and differentials -------------------------------------------------------------

@dataclass(frozen=True)
class MarkedConfig:
    """A genus-0 curve: the dual graph and the coordinate of each branch point p^a on C_tail(a)."""

    graph: Multigraph
    points: Mapping[Arrow, Fraction]
    seed: int | None = None

    def __post_init__(self):
        G = self.graph
        if any(G.genus_fn.values()):
            raise Genus0Error("realization needs every component of genus zero")
        missing = [a.key for a in G.arrows if a not in self.points]
        if missing:
            raise Genus0Error(f"no branch point for arrow {missing[0]}")
        for v in G.vertices.elements:
            pts = [self.points[a] for a in G.arrows_from(v)]
            if len(set(pts)) != len(pts):
                raise Genus0Error(f"branch points on component {v} coincide")

    @classmethod
    def random(cls, G: Multigraph, seed: int, attempt: int = 0) -> "MarkedConfig":
        rng = make_rng(seed, attempt)
        pts: dict[Arrow, Fraction] = {}
        for v in G.vertices.elements:
            used: set[Fraction] = set()
            for a in G.arrows_from(v):
                x = random_nonzero(rng)
                while x in used:
                    x = random_nonzero(rng)
                used.add(x)
                pts[a] = x
        return cls(G, pts, seed)

    @classmethod
    def from_json(cls, G: Multigraph, obj: Mapping) -> "MarkedConfig":
        return cls(G, {G.arrow(k): q(v) for k, v in obj["points"].items()}, obj.get("seed"))

    def to_json(self) -> dict:
        return {"seed": self.seed, "points": {a.key: fmt(self.points[a]) for a in self.graph.arrows}}


@dataclass(frozen=True)
class RationalDifferential:
    """N(z) / prod (z - p)^max(0, t) dz on one component, with twist t per marked point."""

    vertex: str
    marks: tuple[tuple[Arrow, Fraction, int], ...]  # (arrow, point, twist t_a)
    numerator: tuple[Fraction, ...]

    def _mark(self, a: Arrow) -> tuple[Fraction, int]:
        for b, p, t in self.marks:
            if b == a:
                return p, t
        raise Genus0Error(f"arrow {a.key} is not marked on component {self.vertex}")

    def laurent(self, a: Arrow, k: int) -> Fraction:
        """Coefficient of (z - p^a)^k in f."""
        p, _ = self._mark(a)
        m = 0
        rest: Poly = [Fraction(1)]
        for b, pb, t in self.marks:
            if b == a:
                m = max(0, t)
            else:
                rest = poly_mul(rest, poly_power_linear(pb, max(0, t)))
        idx = k + m
        if idx < 0:
            return Fraction(0)
        num = taylor_shift(list(self.numerator), p)
        den = taylor_shift(rest, p)
        return series_quotient(num, den, idx + 1)[idx]

    def residue(self, a: Arrow) -> Fraction:
        return self.laurent(a, -1)

    def leading_coeff(self, a: Arrow, scale: Fraction = Fraction(1)) -> Fraction:
        """Value at p^a as a section of omega(t_a p^a), trivialized by (c (z - p^a))^(-t_a) d(c z)."""
        _, t = self._mark(a)
        return self.laurent(a, -t) * q(scale) ** (t - 1)

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "marks": [{"arrow": a.key, "point": fmt(p), "twist": t} for a, p, t in self.marks],
            "numerator": [fmt(x) for x in self.numerator],
        }


def line_basis(vertex: str, marks: Sequence[tuple[Arrow, Fraction, int]]) -> list[RationalDifferential]:
    """Basis of H^0(P^1, omega(sum t_a p^a)): numerators Z(z) z^k with Z the forced zeros."""
    pts = [p for _, p, _ in marks]
    if len(set(pts)) != len(pts):
        raise Genus0Error(f"marked points on {vertex} coincide")
    poles = sum(max(0, t) for _, _, t in marks)
    zero_poly: Poly = [Fraction(1)]
    zeros = 0
    for _, p, t in marks:
        if t < 0:
            zero_poly = poly_mul(zero_poly, poly_power_linear(p, -t))
            zeros += -t
    count = max(0, poles - zeros - 1)
    out = []
    for k in range(count):
        num = poly_mul(zero_poly, [Fraction(0)] * k + [Fraction(1)])
        out.append(RationalDifferential(vertex, tuple(marks), tuple(num)))
    return out


def _twists(s: SlopeFunction, plus: bool) -> dict[Arrow, int]:
    return {a: (max(0, 1 + s[a]) if plus else 1 + s[a]) for a in s.graph.arrows}


def diff_basis(cfg: MarkedConfig, v: str, s: SlopeFunction, plus: bool = False) -> list[RationalDifferential]:
    """Basis of H^0(C_v, omega_v(sum (1 + s(a)) p^a)); with ``plus`` only the pole part is kept."""
    tw = _twists(s, plus)
    marks = tuple((a, cfg.points[a], tw[a]) for a in cfg.graph.arrows_from(v))
    return line_basis(v, marks)


def residue_vector(omega: RationalDifferential) -> dict[Arrow, Fraction]:
    return {a: omega.residue(a) for a, _, _ in omega.marks}


def leading_coeff(omega: RationalDifferential, a: Arrow, scale: Fraction = Fraction(1)) -> Fraction:
    return omega.leading_coeff(a, scale)


# the spaces ----------------------------------------------------------------------------------

class DifferentialModel:
    """Coordinates on the direct sum of the diff_basis spaces, one block per vertex."""

    def __init__(self, cfg: MarkedConfig, s: SlopeFunction, pi: OrderedPartition, plus: bool = False):
        G = cfg.graph
        if not is_slope_level_pair(s, pi):
            raise GraphError("slope function and partition disagree on upward arrows")
        if G.total_genus < 1:
            raise Genus0Error("the curve has genus 0; there is no space of differentials to realize")
        self.cfg, self.s, self.pi, self.plus = cfg, s, pi, plus
        self.bases = {v: diff_basis(cfg, v, s, plus) for v in G.vertices.elements}
        self.space = DecomposedSpace(G.vertices, tuple(len(self.bases[v]) for v in G.vertices.elements))

    @property
    def graph(self) -> Multigraph:
        return self.cfg.graph

    def _column(self, v: str, k: int) -> int:
        return self.space.offsets[self.graph.vindex(v)] + k

    def functional(self, a: Arrow, value) -> list[Fraction]:
        """The linear map x -> value(omega_{tail a}, a) on coordinates."""
        v = self.graph.tail(a)
        row = [Fraction(0)] * self.space.total
        for k, om in enumerate(self.bases[v]):
            row[self._column(v, k)] = value(om, a)
        return row

    def residue_matrix(self) -> Matrix:
        return [self.functional(a, lambda om, b: om.residue(b)) for a in self.graph.arrows]

    def residue_equations(self) -> Matrix:
        rows, _ = residue_conditions(self.graph, self.pi)
        R = self.residue_matrix()
        n = self.space.total
        return [[sum((c * R[i][j] for i, c in enumerate(r) if c), Fraction(0)) for j in range(n)] for r in rows]

    def whole(self) -> RationalSubspace:
        return RationalSubspace.whole(self.space)

    def w_hat(self) -> RationalSubspace:
        return RationalSubspace.kernel(self.space, self.residue_equations())

    def gluing_equations(self, rho: Mapping[str, Fraction], scales: Mapping[Arrow, Fraction] | None = None) -> Matrix:
        rows = []
        for a in sorted(slope_sets(self.s).integer_upward):
            r = q(rho[a.edge])
            if r == 0:
                raise Genus0Error(f"gluing coefficient of edge {a.edge} is zero")
            ca = q(scales.get(a, 1)) if scales else Fraction(1)
            cb = q(scales.get(a.rev, 1)) if scales else Fraction(1)
            up = self.functional(a, lambda om, b: om.leading_coeff(b, ca))
            down = self.functional(a.rev, lambda om, b: om.leading_coeff(b, cb))
            factor = -(r ** (-self.s[a]))
            rows.append([factor * x + y for x, y in zip(up, down)])
        return rows

    def w_exp(self, rho: Mapping[str, Fraction], scales: Mapping[Arrow, Fraction] | None = None) -> RationalSubspace:
        return self.w_hat().cut(self.gluing_equations(rho, scales))

    def leading_coeffs(self, W: RationalSubspace, a: Arrow) -> list[Fraction]:
        f = self.functional(a, lambda om, b: om.leading_coeff(b))
        return [sum((x * y for x, y in zip(f, row)), Fraction(0)) for row in W.basis]

    def forced_zero_degree(self, v: str) -> int:
        return sum(-(1 + self.s[a]) for a in self.graph.arrows_from(v) if 1 + self.s[a] < 0)


def w_hat(cfg: MarkedConfig, s: SlopeFunction, pi: OrderedPartition) -> RationalSubspace:
    return DifferentialModel(cfg, s, pi).w_hat()


def w_hat_plus(cfg: MarkedConfig, s: SlopeFunction, pi: OrderedPartition) -> RationalSubspace:
    return DifferentialModel(cfg, s, pi, plus=True).w_hat()


def w_exp(cfg: MarkedConfig, s: SlopeFunction, pi: OrderedPartition, rho: Mapping[str, object],
          scales: Mapping[Arrow, Fraction] | None = None) -> RationalSubspace:
    return DifferentialModel(cfg, s, pi).w_exp({e: q(x) for e, x in rho.items()}, scales)


def eta_hat_from_plus(cfg: MarkedConfig, s: SlopeFunction, pi: OrderedPartition) -> SetFunction:
    """I -> dim proj_I(W-hat-plus) minus the forced zeros on I."""
    model = DifferentialModel(cfg, s, pi, plus=True)
    W = model.w_hat()
    nu = nu_star(W)
    G = cfg.graph
    deg = [model.forced_zero_degree(v) for v in G.vertices.elements]
    return SetFunction.from_callable(G.vertices, lambda I: nu[I] - sum(d for i, d in enumerate(deg) if I >> i & 1))


def generates_at_integer_nodes(model: DifferentialModel, W: RationalSubspace) -> dict[str, bool]:
    """Per integer upward arrow: does some element have a nonzero leading coefficient there?"""
    return {a.key: any(model.leading_coeffs(W, a)) for a in sorted(slope_sets(model.s).integer_upward)}


def vanishing_matches(model: DifferentialModel, W: RationalSubspace) -> bool:
    """Each basis element vanishes at p^a exactly when it vanishes at p^(rev a), for integer a."""
    for a in slope_sets(model.s).integer_upward:
        for x, y in zip(model.leading_coeffs(W, a), model.leading_coeffs(W, a.rev)):
            if (x == 0) != (y == 0):
                return False
    return True


# leading coefficients of a quartic pencil on four lines -------------------------------------------

QUARTIC_MONOMIALS = tuple((i, j, 4 - i - j) for i in range(4, -1, -1) for j in range(4 - i, -1, -1))

# rho_{ij} as a signed sum of coefficients a_{i,j,r} of the quartic
RHO_FORMULAS: dict[tuple[int, int], tuple[tuple[int, tuple[int, int, int]], ...]] = {
    (0, 1): ((1, (0, 4, 0)), (1, (0, 2, 2)), (1, (0, 0, 4)), (-1, (0, 3, 1)), (-1, (0, 1, 3))),
    (0, 2): ((1, (4, 0, 0)), (1, (2, 0, 2)), (1, (0, 0, 4)), (-1, (3, 0, 1)), (-1, (1, 0, 3))),
    (0, 3): ((1, (4, 0, 0)), (1, (2, 2, 0)), (1, (0, 4, 0)), (-1, (3, 1, 0)), (-1, (1, 3, 0))),
    (1, 2): ((1, (0, 0, 4)),),
    (1, 3): ((1, (0, 4, 0)),),
    (2, 3): ((1, (4, 0, 0)),),
}


def parse_quartic(obj: Mapping[str, object]) -> dict[tuple[int, int, int], Fraction]:
    """Coefficients from keys like 'a_400' or 'a_4,0,0'; unlisted monomials are zero."""
    coeffs = {m: Fraction(0) for m in QUARTIC_MONOMIALS}
    for k, v in obj.items():
        body = k.removeprefix("a_").replace(",", "")
        digits = [int(c) for c in body] if body.isascii() and body.isdigit() else []
        if len(digits) != 3 or sum(digits) != 4:
            raise Genus0Error(f"{k!r} is not a quartic monomial a_ijr with i+j+r = 4")
        coeffs[tuple(digits)] = q(v)
    return coeffs


def rho_from_quartic(coeffs: Mapping[tuple[int, int, int], object], allow_zero: bool = False) -> dict[tuple[int, int], Fraction]:
    """Leading coefficients of the pencil L0 L1 L2 L3 - t F at the six nodes."""
    a = {m: q(coeffs.get(m, 0)) for m in QUARTIC_MONOMIALS}
    rho = {pair: sum((c * a[m] for c, m in terms), Fraction(0)) for pair, terms in RHO_FORMULAS.items()}
    zero = [p for p, x in rho.items() if x == 0]
    if zero and not allow_zero:
        raise DegeneratePencil(f"the quartic passes through the node {zero[0]}: rho_{zero[0][0]}{zero[0][1]} = 0")
    return rho


def quartic_for_rho(target: Mapping[tuple[int, int], object]) -> dict[tuple[int, int, int], Fraction] | None:
    """Some quartic whose pencil has the given leading coefficients, by an exact linear solve."""
    pairs = list(RHO_FORMULAS)
    col = {m: i for i, m in enumerate(QUARTIC_MONOMIALS)}
    A = []
    for p in pairs:
        row = [Fraction(0)] * len(QUARTIC_MONOMIALS)
        for c, m in RHO_FORMULAS[p]:
            row[col[m]] += c
        A.append(row)
    x = solve(A, [q(target[p]) for p in pairs])
    if x is None:
        return None
    return {m: x[col[m]] for m in QUARTIC_MONOMIALS}


def rho_on_graph(G: Multigraph, rho: Mapping[tuple[int, int], Fraction]) -> dict[str, Fraction]:
    """Move rho_{ij} onto the edge joining the i-th and j-th vertices of a complete graph on four vertices."""
    verts = G.vertices.elements
    if len(verts) != 4 or len(G.edge_ids) != 6:
        raise Genus0Error("the quartic formulas live on the complete graph on four vertices")
    out = {}
    for e in G.edge_ids:
        i, j = sorted(verts.index(x) for x in G.ends[e])
        out[e] = rho[(i, j)]
    return out


# realization with bounded retries -------------------------------------------------------------

@dataclass
class RealizationReport:
    config: MarkedConfig
    w_hat: RationalSubspace
    w_exp: RationalSubspace
    expected_hat: SetFunction | None
    expected_exp: SetFunction | None
    attempts: int
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json(self, basis: bool = False) -> dict:
        G = self.config.graph
        out = {
            "seed": self.config.seed,
            "attempts": self.attempts,
            "dim_w_hat": self.w_hat.dim,
            "dim": self.w_exp.dim,
            "nu_star": nu_star(self.w_exp).to_json()["values"],
            "nu_star_w_hat": nu_star(self.w_hat).to_json()["values"],
            "problems": list(self.problems),
            "config": self.config.to_json(),
        }
        if basis:
            space = self.w_exp.ambient
            out["basis"] = [
                {v: [fmt(x) for x in row[space.offsets[i]: space.offsets[i] + space.dims[i]]]
                 for i, v in enumerate(G.vertices.elements)}
                for row in self.w_exp.basis
            ]
        return out


def _realization_problems(model: DifferentialModel, W_hat: RationalSubspace, W_exp: RationalSubspace,
                      eh: SetFunction, et: SetFunction) -> list[str]:
    G = model.graph
    g = G.total_genus
    n_int = len(slope_sets(model.s).integer_upward)
    problems = []
    if min(eh.values) >= 0:
        if W_hat.dim != g + n_int:
            problems.append(f"dim W-hat is {W_hat.dim}, expected {g + n_int}")
        if nu_star(W_hat) != upmin(eh):
            problems.append("nu* of W-hat differs from UpMin(eta-hat)")
    if min(et.values) >= 0:
        if W_exp.dim != g:
            problems.append(f"dim W-exp is {W_exp.dim}, expected {g}")
        nu = nu_star(W_exp)
        if nu != upmin(et):
            problems.append("nu* of W-exp differs from UpMin(eta)")
        elif all(nu[1 << i] > 0 for i in range(G.n)):
            missing = [k for k, ok in generates_at_integer_nodes(model, W_exp).items() if not ok]
            if missing:
                problems.append(f"W-exp does not generate at integer node {missing[0]}")
    return problems


def realize_pair(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, rho: Mapping[str, object] | None = None,
                 seed: int = 0, attempts: int = 5, config: MarkedConfig | None = None) -> RealizationReport:
    """Build W-hat and W-exp on random branch points, redrawing when the points look special.

    With nonnegative eta-hat (resp. eta) the dimension and nu* of W-hat (resp.
    W-exp) are compared with the UpMin transform; a mismatch triggers a fresh
    configuration, up to ``attempts`` draws. A given ``config`` is used as is.
    """
    rho_q = {e: q(rho[e]) if rho is not None else Fraction(1) for e in G.edge_ids}
    eh, et = eta_hat(G, pi, s), eta(G, pi, s)
    draws = [config] if config is not None else [MarkedConfig.random(G, seed, k) for k in range(attempts)]
    report = None
    for k, cfg in enumerate(draws):
        model = DifferentialModel(cfg, s, pi)
        W_hat = model.w_hat()
        W_exp = W_hat.cut(model.gluing_equations(rho_q))
        problems = _realization_problems(model, W_hat, W_exp, eh, et)
        report = RealizationReport(cfg, W_hat, W_exp, upmin(eh) if min(eh.values) >= 0 else None,
                                   upmin(et) if min(et.values) >= 0 else None, k + 1, problems)
        if not problems:
            break
    return report
