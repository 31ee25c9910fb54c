"""Property suites behind ``artifact verify``.

Each suite draws its instances from a seeded generator, checks every claim in
exact arithmetic and returns a :class:`SuiteResult` with instance counts and
the first few failures. Suites never raise on a failed property; they report.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from . import genus0, lp
from .bricks import (
    contains_brick,
    contains_brick_lp,
    enumerate_bricks,
    find_brick,
    simplex_volume,
    volume,
)
from .cones import (
    ConeH,
    Ghost,
    cone_hrep,
    essential_circuits,
    facets,
    ghost_graph,
    integer_graph_genus,
    interior_membership,
    squash,
    strict_point,
)
from .fans import canonical_fan, enumerate_psl, fan_for_brick, psl_for_brick
from .fixtures import load_graph
from .graph import (
    Arrow,
    Multigraph,
    OrderedPartition,
    SlopeFunction,
    SlopeLevelPair,
    arrows_within,
    level_from,
    slope_from,
    slope_sets,
    zeta,
)
from .potential import PotentialError, check_subintegral, recover_level_function, subintegrability
from .qlinalg import (
    DecomposedSpace,
    GeneralPositionError,
    GluePair,
    PreconditionError,
    cut_by_glue_hyperplanes,
    dichotomy,
    nu_star,
    random_rational,
    random_subspace,
    realize_upmin,
    zero_blocks,
)
from .rational import fmt, nullspace
from .residue import eta, eta_hat, gamma, residue_space
from .setfn import GroundSet, SetFunction, is_nondecreasing, is_submodular, polytope_hrep, upmin, xi_multi

MAX_REPORTED = 20


@dataclass
class SuiteResult:
    name: str
    title: str
    instances: int = 0
    failures: list[str] = field(default_factory=list)
    failure_count: int = 0
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.instances > 0

    def check(self, ok: bool, message: str | Callable[[], str]) -> bool:
        self.instances += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(message() if callable(message) else message)
        return ok

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.title} ({self.instances} checks, {self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "title": self.title,
            "passed": self.passed,
            "instances": self.instances,
            "failures": self.failure_count,
            "first_failures": list(self.failures),
            "notes": list(self.notes),
        }


# random instances ----------------------------------------------------------------------------

def random_graph(rng: random.Random, max_vertices: int = 7, max_edges: int = 14,
                 loops: bool = True, genus: bool = False) -> Multigraph:
    """A connected multigraph: a random spanning tree plus extra edges, loops and parallels allowed."""
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        edges.append((verts[rng.randrange(i)], verts[i]))
    extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(extra):
        x = rng.choice(verts)
        y = rng.choice(verts) if n > 1 else x
        if x == y and not loops:
            continue
        edges.append((x, y))
    if not edges and n == 1 and loops:
        edges.append((verts[0], verts[0]))
    gen = {v: rng.randint(0, 1) for v in verts} if genus else None
    return Multigraph(verts, [(f"e{k}", e) for k, e in enumerate(edges)], gen)


def random_partition(rng: random.Random, G: Multigraph) -> OrderedPartition:
    k = rng.randint(1, G.n)
    levels = {v: rng.randrange(k) for v in G.vertices.elements}
    return level_from(G, levels)


def random_lengths(rng: random.Random, G: Multigraph, top: int = 9) -> dict[str, Fraction]:
    return {e: Fraction(rng.randint(1, top), rng.randint(1, 4)) for e in G.edge_ids}


def random_heights(rng: random.Random, G: Multigraph, top: int = 12) -> dict[str, Fraction]:
    return {v: Fraction(rng.randint(0, top), rng.randint(1, 3)) for v in G.vertices.elements}


def random_pair(rng: random.Random, G: Multigraph) -> tuple[SlopeFunction, OrderedPartition, dict, dict]:
    ell, h = random_lengths(rng, G), random_heights(rng, G)
    return slope_from(G, ell, h), level_from(G, h), ell, h


def raise_slopes(rng: random.Random, s: SlopeFunction) -> SlopeFunction:
    """A slope function above s: lift the lower arrow of some non-integer edges by one."""
    G = s.graph
    vals = dict(s.items())
    for e in G.edge_ids:
        a, b = Arrow(e, 1), Arrow(e, -1)
        if vals[a] + vals[b] == -1 and rng.random() < 0.5:
            vals[rng.choice((a, b))] += 1
    return SlopeFunction(G, vals)


def coarsen(rng: random.Random, pi: OrderedPartition, G: Multigraph) -> OrderedPartition:
    """Merge random runs of consecutive levels."""
    blocks = [list(b) for b in pi.blocks]
    out = [blocks[0]]
    for b in blocks[1:]:
        if rng.random() < 0.5:
            out[-1] = out[-1] + b
        else:
            out.append(b)
    return OrderedPartition.of(out, G)


def interior_sample(rng: random.Random, cone: ConeH) -> list[Fraction] | None:
    """A random point of the open cone: a strict point moved along the equality subspace."""
    x0 = strict_point(cone)
    if x0 is None:
        return None
    m = len(cone.edges)
    eqs = [list(r) for r, _ in cone.eqs + cone.extra_eqs]
    directions = nullspace(eqs, m) if eqs else [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    step = Fraction(1, 2)
    for _ in range(30):
        d = [sum((Fraction(rng.randint(-4, 4)) * row[i] for row in directions), Fraction(0)) for i in range(m)]
        x = [a + step * b for a, b in zip(x0, d)]
        if interior_membership(cone, x):
            return x
        step /= 2
    return list(x0)


# fixture tables for the complete graph on four vertices ----------------------------------------

def phi_k4(ground: GroundSet) -> SetFunction:
    """The submodular function that the double squash produces on K4."""
    u0 = ground.mask(["u0"])

    def value(I: int) -> int:
        if not I:
            return 0
        if not I & u0:
            return 1
        k = bin(I).count("1")
        return {1: 5, 2: 5, 3: 4, 4: 3}[k]

    return SetFunction.from_callable(ground, value)


def chi_k4(ground: GroundSet) -> SetFunction:
    u0 = ground.mask(["u0"])
    return SetFunction.from_callable(ground, lambda I: 0 if not I else (3 if I & u0 else 1))


def k4_pair(G: Multigraph, fast: str = "u1") -> SlopeLevelPair:
    """Levels {u0} above the rest, slope 1 towards ``fast`` and 0 towards the other two."""
    vals = {}
    for a in G.arrows:
        x, y = G.tail(a), G.head(a)
        if x == "u0":
            vals[a] = 1 if y == fast else 0
        elif y == "u0":
            vals[a] = -1
        else:
            vals[a] = 0
    others = [v for v in G.vertices.elements if v != "u0"]
    return SlopeLevelPair(SlopeFunction(G, vals), OrderedPartition.of([others, ["u0"]], G))


def k4_arrow(G: Multigraph, i: int, j: int) -> Arrow:
    x, y = f"u{i}", f"u{j}"
    for e in G.edge_ids:
        if G.ends[e] == (x, y):
            return Arrow(e, 1)
        if G.ends[e] == (y, x):
            return Arrow(e, -1)
    raise KeyError((i, j))


def circuit_with_arrows(G: Multigraph, s: SlopeFunction, pi: OrderedPartition, arrows: set[Arrow]):
    for z in essential_circuits(G, s, pi):
        if {t for t in z if isinstance(t, Arrow)} == arrows:
            return z
    return None


def row_from(edges: Sequence[str], coeffs: dict[str, int]) -> tuple[Fraction, ...]:
    return tuple(Fraction(coeffs.get(e, 0)) for e in edges)


def _edge(G: Multigraph, i: int, j: int) -> str:
    return k4_arrow(G, i, j).edge


def sigma_k4(G: Multigraph, i: int) -> ConeH:
    """Lengths with l_{0i} at most the other two lengths at u0."""
    others = [j for j in (1, 2, 3) if j != i]
    rows = [(row_from(G.edge_ids, {_edge(G, 0, i): 1, _edge(G, 0, j): -1}), None) for j in others]
    return ConeH(G.edge_ids, rows, [])


# the suites ----------------------------------------------------------------------------------

def suite_upmin_table(seed: int) -> SuiteResult:
    r = SuiteResult("upmin-table", "UpMin of the four-lines function equals its tabulated transform")
    ground = GroundSet(("u0", "u1", "u2", "u3"))
    phi, chi = phi_k4(ground), chi_k4(ground)
    r.check(is_submodular(phi) and phi.range == 3, "phi is not submodular of range 3")
    got = upmin(phi)
    for m in ground.subsets():
        r.check(got[m] == chi[m], lambda m=m: f"UpMin({{{ground.key(m)}}}) = {fmt(got[m])}, table says {fmt(chi[m])}")
    return r


def suite_k4(seed: int) -> SuiteResult:
    """Checks are tagged (a) through (g); the tag leads every failure message."""
    r = SuiteResult("k4-fixture", "complete graph on four vertices: residues, cones, bricks, fans")
    G = load_graph("k4")
    V = G.vertices

    def chk(part: str, ok: bool, msg) -> bool:
        return r.check(ok, lambda: f"({part}) " + (msg() if callable(msg) else msg))

    # (a) trivial pair
    g0 = gamma(G, OrderedPartition.trivial(G))
    for m in V.subsets():
        k = bin(m).count("1")
        want = {0: 0, 1: 2}.get(k, 3)
        chk("a", g0[m] == want, lambda m=m: f"gamma_trivial({{{V.key(m)}}}) = {fmt(g0[m])}, expected {want}")
    # (b) the two-level pair, against the tabulated values
    pair = k4_pair(G)
    s, pi = pair.s, pair.pi
    ss = slope_sets(s)
    chk("b", {a.key for a in ss.upward} == {k4_arrow(G, 0, j).key for j in (1, 2, 3)}, "upward arrows differ")
    chk("b", ss.integer_upward == {k4_arrow(G, 0, 1)}, "integer upward arrows differ")
    gp, z, et = gamma(G, pi), zeta(s), eta(G, pi, s)
    low, top = V.mask(["u1", "u2", "u3"]), V.mask(["u0"])
    chk("b", gp[low] == 1 and gp[top] == 2, "gamma of the two-level partition differs")
    for i in (1, 2, 3):
        chk("b", gp[V.mask(["u0", f"u{i}"])] == 3, f"gamma({{u0,u{i}}}) != 3")
        chk("b", et[V.mask([f"u{i}"])] == 1, f"eta({{u{i}}}) != 1")
    chk("b", et[top] == 3 and et[low] == 1, "eta({u0}) or eta({u1,u2,u3}) differs")
    for m in V.subsets():
        want = 1 if m == top else 0
        chk("b", z[m] == want, lambda m=m: f"tabulated zeta table: zeta({{{V.key(m)}}}) = {fmt(z[m])}, table says {want}")
    chk("b", upmin(et) == et, lambda: "tabulated claim eta = UpMin(eta) fails at "
        + ", ".join(f"{{{V.key(m)}}}" for m in V.subsets() if upmin(et)[m] != et[m]))
    # (c) cone
    cone = cone_hrep(G, s, pi)
    chk("c", cone.equals(sigma_k4(G, 1)), "cone differs from {l01 <= l02, l01 <= l03}")
    # (d) the polytope is the extremal brick at u0
    bricks = enumerate_bricks(V, G.total_genus)
    B0 = find_brick(bricks, "B0")
    chi = upmin(et)
    chk("d", chi == chi_k4(V), "UpMin(eta) differs from the four-lines transform")
    chk("d", contains_brick(chi, B0), "polytope misses B0")
    A_ub, b_ub, A_eq, b_eq = polytope_hrep(chi).matrices()
    for mask in range(1, V.full):
        row = [Fraction(mask >> i & 1) for i in range(V.n)]
        hi = lp.maximize(row, A_ub, b_ub, A_eq, b_eq).value
        lo = -lp.maximize([-x for x in row], A_ub, b_ub, A_eq, b_eq).value
        chk("d", B0.floor(mask) <= lo and hi <= B0.ceil(mask), f"polytope leaves B0 along {{{V.key(mask)}}}")
    # (e) double squash, both orders
    a01 = k4_arrow(G, 0, 1)
    for first, second in ((2, 3), (3, 2)):
        z1 = circuit_with_arrows(G, s, pi, {k4_arrow(G, first, 0), a01})
        if not chk("e", z1 is not None, f"no essential circuit a{first}0 a01"):
            continue
        p1 = squash(G, s, pi, z1)
        z2 = circuit_with_arrows(G, p1.s, p1.pi, {k4_arrow(G, second, 0), a01})
        if not chk("e", z2 is not None, f"no essential circuit a{second}0 a01 after the first squash"):
            continue
        p2 = squash(G, p1.s, p1.pi, z2)
        ok = all(p2.s[k4_arrow(G, 0, j)] == 1 for j in (1, 2, 3))
        ok &= len(slope_sets(p2.s).integer_edges) == 3 and p2.pi == pi
        chk("e", ok, "double squash does not give slope 1 on all three integer arrows at u0")
        chk("e", eta(G, p2.pi, p2.s) == phi_k4(V), "eta of the double squash differs from phi")
        flat = [(row_from(G.edge_ids, {_edge(G, 0, 1): 1, _edge(G, 0, j): -1}), None) for j in (2, 3)]
        chk("e", cone_hrep(G, p2.s, p2.pi).equals(ConeH(G.edge_ids, [], flat)), "squashed cone is not l01 = l02 = l03")
    # (f) fan of B0
    psl = enumerate_psl(G)
    fan = fan_for_brick(G, B0, psl)
    top_cones = fan.maximal()
    chk("f", len(top_cones) == 3, f"fan of B0 has {len(top_cones)} maximal cones, expected 3")
    sig = [sigma_k4(G, i) for i in (1, 2, 3)]
    for i in top_cones:
        chk("f", sum(fan.cones[i].equals(c) for c in sig) == 1, "a maximal cone of B0's fan is not one of the three")
    chk("f", len(fan.cones) == 7, f"fan of B0 has {len(fan.cones)} cones, expected 3 + 3 walls + their common face")
    # (g) canonical fan: every cell contains the ray of constant lengths
    cfan = canonical_fan(G, psl, bricks)
    ones = [Fraction(1)] * len(G.edge_ids)
    for c in cfan.cones:
        chk("g", c.contains(ones), "a cell of the canonical fan misses the constant ray")
    r.notes.append(f"canonical fan: {len(cfan.cones)} cells, {len(psl)} permissible pairs, {len(bricks)} bricks")
    return r


def suite_residue_dimension(seed: int, count: int = 200) -> SuiteResult:
    r = SuiteResult("residue-dimension", "residue space has dimension |E| - |V| + 1")
    rng = random.Random(f"{seed}/residue")
    loops = parallels = 0
    for _ in range(count):
        G = random_graph(rng, 7, 14)
        pi = random_partition(rng, G)
        loops += any(G.is_loop(e) for e in G.edge_ids)
        parallels += len({frozenset(G.ends[e]) for e in G.edge_ids}) < len(G.edge_ids)
        d = residue_space(G, pi).dim
        r.check(d == G.cycle_rank, lambda: f"{G.to_json()} {pi.to_json(G)}: dim {d} != {G.cycle_rank}")
    r.notes.append(f"{loops} graphs with loops, {parallels} with parallel edges")
    return r


def suite_monotonicity(seed: int, count: int = 60) -> SuiteResult:
    r = SuiteResult("monotonicity", "gamma under coarsening, zeta under raised slopes, modularity, cut identity")
    rng = random.Random(f"{seed}/monotone")
    for _ in range(count):
        G = random_graph(rng, 6, 10)
        V = G.vertices
        s, pi, _, _ = random_pair(rng, G)
        g1 = gamma(G, pi)
        r.check(is_submodular(g1) and is_nondecreasing(g1), "gamma is not submodular and nondecreasing")
        pi2 = coarsen(rng, pi, G)
        r.check(gamma(G, pi2) >= g1, lambda: f"gamma drops under coarsening on {G.to_json()}")
        s2 = raise_slopes(rng, s)
        r.check(zeta(s2) >= zeta(s), lambda: f"zeta drops under raised slopes on {G.to_json()}")
        ss = slope_sets(s)
        z = zeta(s)
        f1 = SetFunction.from_callable(V, lambda I: arrows_within(G, ss.integer_upward, V.full ^ I, I))
        f2 = SetFunction.from_callable(V, lambda I: -arrows_within(G, ss.integer_upward, I))
        r.check((z - f1).is_modular(), "zeta minus integer arrows entering I is not modular")
        r.check((z - f2).is_modular(), "zeta plus integer arrows inside I is not modular")
        for I in V.subsets():
            out_sum = sum(s[a] for a in G.arrows if G.tail_mask(a) & I and not G.head_mask(a) & I)
            tail_sum = sum(s[a] for a in G.arrows if G.tail_mask(a) & I)
            inside = arrows_within(G, ss.upward, I) - arrows_within(G, ss.integer_upward, I)
            r.check(out_sum == tail_sum + inside, lambda I=I: f"cut identity fails at {V.key(I)}")
    return r


def suite_subintegrability(seed: int, count: int = 500) -> SuiteResult:
    r = SuiteResult("subintegrability", "potential certificates checked against brute-force circuits")
    rng = random.Random(f"{seed}/subint")
    infeasible = 0
    for k in range(count):
        G = random_graph(rng, 6, 10)
        h = {v: Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for v in G.vertices.elements}
        x: dict[Arrow, Fraction | None] = {}
        for a in G.arrows:
            d = h[G.tail(a)] - h[G.head(a)]
            roll = rng.random()
            if roll < 0.1:
                x[a] = None
            elif roll < 0.55:
                x[a] = d
            else:
                x[a] = d - Fraction(rng.randint(1, 5), rng.randint(1, 3))
        if k % 10 == 9 and G.edge_ids:
            # push one arrow above its bound: a positive circuit unless it is unchecked
            a = rng.choice(G.arrows)
            if x[a] is not None and x[a.rev] is not None:
                x[a] = -x[a.rev] + 1
                infeasible += 1
                try:
                    subintegrability(G, x)
                    r.check(False, "a positive edge circuit was accepted")
                except PotentialError:
                    r.check(True, "")
                continue
        try:
            pot = subintegrability(G, x)
        except PotentialError as exc:
            r.check(False, f"feasible instance rejected: {exc}")
            continue
        problems = check_subintegral(G, x, pot)
        r.check(not problems, lambda: f"{G.to_json()}: {problems[0]}")
    r.notes.append(f"{infeasible} infeasible instances")
    return r


def suite_cone_roundtrip(seed: int, count: int = 100) -> SuiteResult:
    r = SuiteResult("cone-roundtrip", "lengths lie in the open cone of their slope-level pair, and levels are recovered")
    rng = random.Random(f"{seed}/roundtrip")
    for _ in range(count):
        G = random_graph(rng, 5, 8)
        s, pi, ell, h = random_pair(rng, G)
        vec = [ell[e] for e in G.edge_ids]
        r.check(interior_membership(cone_hrep(G, s, pi), vec),
                lambda: f"{G.to_json()} lengths {[fmt(x) for x in vec]} outside the open cone")
    pairs = []
    for name in ("k4", "theta", "two_cycle"):
        G = load_graph(name)
        pairs += [(G, p) for p in enumerate_psl(G, with_bricks=False)]
    sampled = 0
    while sampled < count:
        G, p = pairs[sampled % len(pairs)]
        x = interior_sample(rng, p.cone)
        sampled += 1
        if not r.check(x is not None, "no interior point in a permissible cone"):
            continue
        try:
            h = recover_level_function(G, x, p.pair.s, p.pair.pi)
            ok = slope_from(G, x, h) == p.pair.s and level_from(G, h) == p.pair.pi
        except PotentialError as exc:
            ok = False
        r.check(ok, lambda: f"levels not recovered for {p.pair.to_json()}")
    return r


def suite_squash(seed: int) -> SuiteResult:
    r = SuiteResult("squash-facets", "cone dimension, facets by squashing, integer-genus increment")
    total = 0
    for name in ("k4", "theta"):
        G = load_graph(name)
        for p in enumerate_psl(G, with_bricks=False):
            s, pi = p.pair.s, p.pair.pi
            cone = p.cone
            d = cone.dimension()
            r.check(d == len(G.edge_ids) - integer_graph_genus(G, s, pi), f"cone dimension differs for {p.pair.to_json()}")
            eta0 = eta(G, pi, s)
            gg = ghost_graph(G, s, pi)
            for f in facets(G, s, pi):
                total += 1
                s2, pi2 = f.pair.s, f.pair.pi
                face = cone.with_hyperplane(gg.row(f.circuit), f.circuit)
                r.check(cone_hrep(G, s2, pi2).equals(face), "squashed cone is not the face on the circuit hyperplane")
                r.check(face.dimension() == d - 1, "face is not a facet")
                r.check(pi2.coarsens(pi), "squashed partition does not coarsen")
                r.check(s2 >= s, "squashed slopes are not larger")
                r.check(slope_sets(s2).integer_edges > slope_sets(s).integer_edges, "integer edges do not grow")
                r.check(f.genus_after == f.genus_before + 1, "integer graph genus does not go up by one")
                r.check(eta(G, pi2, s2) >= eta0, "eta drops after squashing")
    r.notes.append(f"{total} facets")
    return r


def suite_bricks(seed: int, count: int = 50) -> SuiteResult:
    r = SuiteResult("brick-tiling", "one open cone per brick at generic lengths; brick volumes fill the simplex")
    rng = random.Random(f"{seed}/bricks")
    for name in ("k4", "theta"):
        G = load_graph(name)
        psl = enumerate_psl(G)
        bricks = enumerate_bricks(G.vertices, G.total_genus)
        groups = [psl_for_brick(psl, B) for B in bricks]
        for _ in range(count):
            ell = [Fraction(rng.randint(1, 10**6), rng.randint(1, 10**3)) for _ in G.edge_ids]
            for B, ps in zip(bricks, groups):
                hits = sum(interior_membership(p.cone, ell) for p in ps)
                r.check(hits == 1, lambda: f"{name}, brick {B.key}: {hits} open cones contain {[fmt(x) for x in ell]}")
    for n in range(1, 5):
        for g in range(1, 5):
            ground = GroundSet(tuple(f"v{i}" for i in range(n)))
            bricks = enumerate_bricks(ground, g)
            total = sum((volume(B) for B in bricks), Fraction(0))
            r.check(total == simplex_volume(n, g), f"n={n}, g={g}: volumes sum to {fmt(total)}")
    # containment by ceilings agrees with the LP oracle
    for _ in range(100):
        n, g = rng.randint(2, 4), rng.randint(1, 3)
        ground = GroundSet(tuple(f"v{i}" for i in range(n)))
        bricks = enumerate_bricks(ground, g)
        B = rng.choice(bricks)
        chi = random_polymatroid(rng, ground, g)
        r.check(contains_brick(chi, B) == contains_brick_lp(chi, B), "ceiling test and LP oracle disagree")
    return r


def random_polymatroid(rng: random.Random, ground: GroundSet, g: int) -> SetFunction:
    """UpMin of a random integer submodular function of range g (rank of random vectors, shifted)."""
    for _ in range(100):
        k = g + rng.randint(0, 2)
        space = DecomposedSpace.of(ground.elements, [rng.randint(1, 2) for _ in ground.elements])
        if k > space.total:
            continue
        W = random_subspace(space, k, rng)
        nu = nu_star(W)
        f = nu + xi_multi(ground, [rng.randint(1, ground.full) for _ in range(k - g)])
        if f.range == g and min(f.values) >= 0:
            return upmin(f)
    return SetFunction.from_callable(ground, lambda I: g if I else 0)


def suite_realizability(seed: int, count: int = 100) -> SuiteResult:
    r = SuiteResult("realizability", "random flag and gluing-hyperplane cuts realize the UpMin transform")
    rng = random.Random(f"{seed}/realize")
    flags = negative = retries = 0
    k = 0
    while flags < count:
        k += 1
        n = rng.randint(1, 4)
        dims = [rng.randint(0, 3) for _ in range(n)]
        space = DecomposedSpace.of([f"v{i}" for i in range(n)], dims)
        W = random_subspace(space, rng.randint(0, space.total), rng)
        Js = [rng.randint(1, space.ground.full) for _ in range(rng.randint(0, 3))]
        try:
            rep = realize_upmin(W, Js, seed=seed * 100_000 + k)
            flags += 1
            retries += rep.attempts - 1
            r.check(rep.ok, "flag cut misses UpMin")
        except PreconditionError as exc:
            negative += 1
            r.check(bool(exc.zero_blocks), "negative transform without a vanishing block")
        except GeneralPositionError as exc:
            flags += 1
            r.check(False, str(exc))
    glued = 0
    while glued < count:
        k += 1
        n = rng.randint(1, 3)
        dims = [rng.randint(1, 3) for _ in range(n)]
        space = DecomposedSpace.of([f"v{i}" for i in range(n)], dims)
        W = random_subspace(space, rng.randint(1, space.total), rng)
        pairs = []
        for _ in range(rng.randint(0, 3)):
            J = rng.randint(1, space.ground.full)
            pairs.append(GluePair(J, {i: tuple(random_rational(rng) for _ in range(dims[i]))
                                      for i in range(n) if J >> i & 1}))
        target = nu_star(W) + xi_multi(space.ground, [p.mask for p in pairs])
        if min(target.values) < 0:
            continue
        glued += 1
        try:
            rep = cut_by_glue_hyperplanes(W, pairs, seed=seed * 100_000 + k)
            retries += rep.attempts - 1
            r.check(rep.ok, "gluing cut misses UpMin")
        except GeneralPositionError as exc:
            r.check(False, str(exc))
    r.notes.append(f"{flags} flag cuts, {negative} negative transforms, {glued} gluing cuts, {retries} redraws")
    return r


def k4_negative_pair(G: Multigraph) -> SlopeLevelPair:
    """{u0} above the rest with slope 2 on every edge at u0: eta({u1,u2,u3}) = -2."""
    vals = {}
    for a in G.arrows:
        x, y = G.tail(a), G.head(a)
        vals[a] = 2 if x == "u0" else (-2 if y == "u0" else 0)
    others = [v for v in G.vertices.elements if v != "u0"]
    return SlopeLevelPair(SlopeFunction(G, vals), OrderedPartition.of([others, ["u0"]], G))


def suite_genus0(seed: int, configs: int = 30) -> SuiteResult:
    r = SuiteResult("genus0", "differentials on rational components realize UpMin(eta-hat) and UpMin(eta)")
    retries = 0
    for name, bound in (("k4", None), ("theta", 2)):
        G = load_graph(name)
        if bound is None:
            pairs = [p.pair for p in enumerate_psl(G, with_bricks=False)]
        else:
            pairs = [SlopeLevelPair(s, pi) for s, pi in bounded_pairs(G, bound) if min(eta_hat(G, pi, s).values) >= 0]
        for c in range(configs):
            for i, pair in enumerate(pairs):
                s, pi = pair.s, pair.pi
                rng = random.Random(f"{seed}/{name}/{c}/{i}")
                rho = {e: Fraction(rng.randint(1, 97), rng.randint(1, 97)) for e in G.edge_ids}
                rep = genus0.realize_pair(G, s, pi, rho, seed=seed * 1000 + c)
                retries += rep.attempts - 1
                r.check(rep.ok, lambda: f"{name} {pair.to_json()}: {rep.problems[0]}")
                model = genus0.DifferentialModel(rep.config, s, pi)
                r.check(rep.w_exp.issubspace(rep.w_hat) and rep.w_hat.issubspace(model.whole()),
                        "W-exp, W-hat and the ambient space are not nested")
                r.check(genus0.vanishing_matches(model, rep.w_exp), "a basis element vanishes on one branch only")
                r.check(genus0.eta_hat_from_plus(rep.config, s, pi) == eta_hat(G, pi, s),
                        "eta-hat differs from dim proj(W-hat-plus) minus forced zeros")
                if c == 0:
                    ok = all(sum(om.residue(a) for a, _, _ in om.marks) == 0
                             for v in G.vertices.elements for om in model.bases[v])
                    r.check(ok, "a basis differential has residues not summing to zero")
    # vanishing block on a pair with a negative eta value
    G = load_graph("k4")
    bad = k4_negative_pair(G)
    et = eta(G, bad.pi, bad.s)
    r.check(any(v <= 0 for v in et.values[1:]), "constructed pair has positive eta")
    cfg = genus0.MarkedConfig.random(G, seed)
    W = genus0.w_exp(cfg, bad.s, bad.pi, {e: 1 for e in G.edge_ids})
    r.check(bool(zero_blocks(W)), "W-exp has no vanishing block although eta is not positive")
    r.notes.append(f"{retries} configuration redraws")
    return r


def bounded_pairs(G: Multigraph, bound: int) -> Iterable[tuple[SlopeFunction, OrderedPartition]]:
    """Every slope-level pair with downward slopes in [-bound, -1] on vertical edges."""
    from .fans import ordered_partitions

    for blocks in ordered_partitions(G.vertices.elements):
        pi = OrderedPartition.of(blocks, G)
        ups = []
        for e in G.edge_ids:
            a = Arrow(e, 1)
            if pi.level[G.tail(a)] != pi.level[G.head(a)]:
                ups.append(a if pi.level[G.tail(a)] > pi.level[G.head(a)] else a.rev)
        for ts in product(range(1, bound + 1), repeat=len(ups)):
            for integral in product((True, False), repeat=len(ups)):
                vals = {a: 0 for a in G.arrows}
                for a, t, integ in zip(ups, ts, integral):
                    vals[a] = t if integ else t - 1
                    vals[a.rev] = -t
                yield SlopeFunction(G, vals), pi


def suite_quartic(seed: int) -> SuiteResult:
    r = SuiteResult("quartic", "leading coefficients of a quartic pencil on four lines")
    rho = genus0.rho_from_quartic({(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})
    want = {(0, 1): 2, (0, 2): 2, (0, 3): 2, (1, 2): 1, (1, 3): 1, (2, 3): 1}
    for k, v in want.items():
        r.check(rho[k] == v, f"rho_{k[0]}{k[1]} = {fmt(rho[k])}, expected {v}")
    try:
        genus0.rho_from_quartic({(4, 0, 0): 1})
        r.check(False, "x1^4 was not flagged as degenerate")
    except genus0.DegeneratePencil:
        r.check(True, "")
    rng = random.Random(f"{seed}/quartic")
    targets = [{k: Fraction(1) for k in want}] + [
        {k: Fraction(rng.choice((-1, 1)) * rng.randint(1, 50), rng.randint(1, 50)) for k in want} for _ in range(20)]
    for t in targets:
        F = genus0.quartic_for_rho(t)
        r.check(F is not None and genus0.rho_from_quartic(F) == t, "no quartic hits the target leading coefficients")
    return r


SUITES: dict[str, Callable[[int], SuiteResult]] = {
    "upmin-table": suite_upmin_table,
    "k4-fixture": suite_k4,
    "residue-dimension": suite_residue_dimension,
    "monotonicity": suite_monotonicity,
    "subintegrability": suite_subintegrability,
    "cone-roundtrip": suite_cone_roundtrip,
    "squash-facets": suite_squash,
    "brick-tiling": suite_bricks,
    "realizability": suite_realizability,
    "genus0": suite_genus0,
    "quartic": suite_quartic,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    try:
        res = SUITES[name](seed)
    except Exception as exc:  # a crash is a failed suite, reported like any other failure
        res = SuiteResult(name, "crashed")
        res.check(False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run(names: Sequence[str] | None = None, seed: int = 0, progress: Callable[[SuiteResult], None] | None = None) -> list[SuiteResult]:
    out = []
    for name in names or list(SUITES):
        res = run_suite(name, seed)
        if progress:
            progress(res)
        out.append(res)
    return out


def report(results: Sequence[SuiteResult], seed: int) -> dict:
    return {
        "seed": seed,
        "passed": all(r.passed for r in results),
        "suites": [r.to_json() for r in results],
    }
