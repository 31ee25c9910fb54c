"""Elementary circuits of a directed multigraph.

Johnson's algorithm finds the elementary cycles of the underlying simple
digraph (one per vertex sequence, each started at its least vertex). Each
vertex cycle is then expanded over every choice of parallel arrow between
consecutive vertices, so two opposite arrows of one edge form a circuit of
length two and a loop arrow forms a circuit of length one.
"""

from __future__ import annotations

from itertools import product
from typing import Hashable, Iterator, Sequence

DEFAULT_CAP = 10**6


class CircuitOverflow(RuntimeError):
    """Raised when enumeration would exceed the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} elementary circuits; raise the cap to continue")
        self.cap = cap


def _vertex_cycles(n: int, succ: list[list[int]]) -> Iterator[list[int]]:
    """Johnson's algorithm on vertices 0..n-1 with successor lists."""
    for s in range(n):
        # restrict to vertices >= s; self-loops are cycles of length one
        blocked = [False] * n
        bmap: list[set[int]] = [set() for _ in range(n)]
        path = [s]
        blocked[s] = True
        # iterative version of CIRCUIT(v): stack frames (vertex, successor iterator, found flag)
        stack = [(s, iter([w for w in succ[s] if w >= s]), False)]

        def unblock(u: int) -> None:
            todo = [u]
            while todo:
                x = todo.pop()
                if blocked[x]:
                    blocked[x] = False
                    todo.extend(bmap[x])
                    bmap[x].clear()

        while stack:
            v, it, found = stack[-1]
            advanced = False
            for w in it:
                if w == s:
                    yield list(path)
                    found = True
                elif not blocked[w]:
                    stack[-1] = (v, it, found)
                    path.append(w)
                    blocked[w] = True
                    stack.append((w, iter([x for x in succ[w] if x >= s]), False))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if found:
                unblock(v)
            else:
                for w in succ[v]:
                    if w >= s:
                        bmap[w].add(v)
            path.pop()
            if stack:
                pv, pit, pfound = stack[-1]
                stack[-1] = (pv, pit, pfound or found)


def elementary_circuits(
    vertices: Sequence[Hashable],
    arrows: Sequence[tuple[Hashable, Hashable, Hashable]],
    cap: int = DEFAULT_CAP,
) -> list[tuple[Hashable, ...]]:
    """All elementary circuits as tuples of arrow tokens, head to tail.

    ``arrows`` lists ``(token, tail, head)``. A circuit visits each vertex at
    most once. Raises :class:`CircuitOverflow` past ``cap`` circuits.
    """
    index = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    between: dict[tuple[int, int], list[Hashable]] = {}
    for tok, t, h in arrows:
        between.setdefault((index[t], index[h]), []).append(tok)
    succ = [sorted({h for (t, h) in between if t == i}) for i in range(n)]
    out: list[tuple[Hashable, ...]] = []
    for cyc in _vertex_cycles(n, succ):
        hops = [between[(cyc[i], cyc[(i + 1) % len(cyc)])] for i in range(len(cyc))]
        for choice in product(*hops):
            out.append(tuple(choice))
            if len(out) > cap:
                raise CircuitOverflow(cap)
    return out
