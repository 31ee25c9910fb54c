from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from artifact.fixtures import load_graph
from artifact.graph import Multigraph, level_from, slope_from
from artifact.setfn import GroundSet, SetFunction

settings.register_profile(
    "exact",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")

small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=5)
positive_fractions = st.fractions(min_value=Fraction(1, 5), max_value=8, max_denominator=5)


@st.composite
def multigraphs(draw, max_vertices: int = 5, max_extra: int = 5, loops: bool = True, genus: bool = False):
    """Connected multigraphs: a random spanning tree plus extra edges (loops and parallels allowed)."""
    n = draw(st.integers(1, max_vertices))
    verts = [f"v{i}" for i in range(n)]
    edges = [(verts[draw(st.integers(0, i - 1))], verts[i]) for i in range(1, n)]
    lo = 1 if n == 1 else 0
    for _ in range(draw(st.integers(lo, max_extra))):
        x = draw(st.sampled_from(verts))
        y = draw(st.sampled_from(verts))
        if x == y and not loops:
            continue
        edges.append((x, y))
    gen = {v: draw(st.integers(0, 1)) for v in verts} if genus else None
    return Multigraph(verts, [(f"e{k}", e) for k, e in enumerate(edges)], gen)


@st.composite
def graphs_with_levels(draw, **kw):
    """A graph with rational edge lengths and vertex heights, so (s, pi) is a slope-level pair."""
    G = draw(multigraphs(**kw))
    ell = {e: draw(positive_fractions) for e in G.edge_ids}
    h = {v: draw(st.fractions(min_value=0, max_value=6, max_denominator=3)) for v in G.vertices.elements}
    return G, ell, h, slope_from(G, ell, h), level_from(G, h)


@st.composite
def set_functions(draw, max_n: int = 4, lo: int = -4, hi: int = 6):
    n = draw(st.integers(1, max_n))
    ground = GroundSet(tuple(f"x{i}" for i in range(n)))
    vals = [0] + [draw(st.integers(lo, hi)) for _ in range((1 << n) - 1)]
    return SetFunction(ground, vals)


@st.composite
def submodular_functions(draw, max_n: int = 4):
    """Sums of weighted coverage-style functions min(|I & S|, c), which are submodular."""
    n = draw(st.integers(1, max_n))
    ground = GroundSet(tuple(f"x{i}" for i in range(n)))
    terms = draw(st.lists(st.tuples(st.integers(1, (1 << n) - 1), st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=4))
    mod = [draw(st.integers(-2, 2)) for _ in range(n)]

    def value(I: int) -> int:
        v = sum(w * min(bin(I & S).count("1"), c) for S, c, w in terms)
        return v + sum(mod[i] for i in range(n) if I >> i & 1)

    return SetFunction.from_callable(ground, value)


@pytest.fixture(scope="session")
def k4():
    return load_graph("k4")


@pytest.fixture(scope="session")
def theta():
    return load_graph("theta")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(REPORT, key=lambda s: int(s.split(":")[0].split()[-1])):
            terminalreporter.write_line(line)
