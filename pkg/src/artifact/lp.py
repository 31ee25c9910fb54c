"""Exact linear programming over the rationals.

A dense two-phase tableau simplex with Bland's anticycling rule. It is slow
compared with floating-point solvers, but it never needs a tolerance, and the
problems in this package have at most a few dozen variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rational import q

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.T = [r + [b] for r, b in zip(rows, rhs)]
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        pr = T[r]
        pv = pr[c]
        if pv != 1:
            pr = [x / pv for x in pr]
            T[r] = pr
        nz = [j for j, b in enumerate(pr) if b != 0]
        for i, row in enumerate(T):
            if i != r:
                f = row[c]
                if f != 0:
                    row = row[:]
                    for j in nz:
                        row[j] -= f * pr[j]
                    T[i] = row
        self.basis[r] = c

    def run(self, cost: list[Fraction], allowed: int) -> str:
        """Maximise ``cost . x`` over the current tableau; columns >= allowed never enter."""
        T = self.T
        while True:
            # reduced costs: c_j - c_B B^-1 A_j, computed on the fly
            cb = [cost[b] for b in self.basis]
            entering = -1
            for j in range(allowed):
                rc = cost[j]
                for i, row in enumerate(T):
                    if row[j] != 0 and cb[i] != 0:
                        rc -= cb[i] * row[j]
                if rc > 0:
                    entering = j
                    break
            if entering < 0:
                return "optimal"
            best = None
            for i, row in enumerate(T):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nonneg: bool | Sequence[int] = False,
) -> LPResult:
    """Maximise ``c . x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    Variables are free unless listed in ``nonneg`` (or ``nonneg=True`` for all).
    """
    n = len(c)
    c = [q(x) for x in c]
    if nonneg is True:
        pos = set(range(n))
    elif nonneg is False:
        pos = set()
    else:
        pos = set(nonneg)
    # column map: each free variable becomes p - m
    cols: list[tuple[int, int]] = []  # (original index, sign)
    for j in range(n):
        cols.append((j, 1))
        if j not in pos:
            cols.append((j, -1))
    nstruct = len(cols)

    def expand(row):
        row = [q(x) for x in row]
        return [row[j] * s for j, s in cols]

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    kinds: list[str] = []
    for a, b in zip(A_ub, b_ub):
        rows.append(expand(a))
        rhs.append(q(b))
        kinds.append("ub")
    for a, b in zip(A_eq, b_eq):
        rows.append(expand(a))
        rhs.append(q(b))
        kinds.append("eq")
    m = len(rows)
    nslack = sum(1 for k in kinds if k == "ub")
    # slack columns, then artificial columns
    full_rows: list[list[Fraction]] = []
    basis: list[int] = []
    art_rows: list[int] = []
    slack_idx = nstruct
    for i in range(m):
        r = rows[i] + [ZERO] * nslack
        if kinds[i] == "ub":
            r[slack_idx] = ONE
            my_slack = slack_idx
            slack_idx += 1
        else:
            my_slack = -1
        if rhs[i] < 0:
            r = [-x for x in r]
            rhs[i] = -rhs[i]
            needs_art = True
        else:
            needs_art = my_slack < 0
        full_rows.append(r)
        if needs_art:
            art_rows.append(i)
            basis.append(-1)
        else:
            basis.append(my_slack)
    nbase = nstruct + nslack
    nart = len(art_rows)
    for i in range(m):
        full_rows[i] = full_rows[i] + [ZERO] * nart
    for k, i in enumerate(art_rows):
        full_rows[i][nbase + k] = ONE
        basis[i] = nbase + k
    tab = _Tableau(full_rows, rhs, basis)
    total = nbase + nart

    if nart:
        cost1 = [ZERO] * nbase + [-ONE] * nart
        tab.run(cost1, total)
        val = sum((tab.T[i][-1] for i, b in enumerate(tab.basis) if b >= nbase), ZERO)
        if val != 0:
            return LPResult("infeasible")
        # drive remaining (zero-valued) artificials out of the basis
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= nbase:
                row = tab.T[i]
                j = next((j for j in range(nbase) if row[j] != 0), None)
                if j is None:
                    del tab.T[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j)
            i += 1
        tab.T = [row[:nbase] + [row[-1]] for row in tab.T]

    cost2 = [c[j] * s for j, s in cols] + [ZERO] * nslack
    status = tab.run(cost2, nbase)
    if status == "unbounded":
        return LPResult("unbounded")
    y = [ZERO] * nbase
    for i, b in enumerate(tab.basis):
        y[b] = tab.T[i][-1]
    x = [ZERO] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * y[k]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult("optimal", tuple(x), value)


def minimize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), nonneg=False) -> LPResult:
    res = maximize([-q(x) for x in c], A_ub, b_ub, A_eq, b_eq, nonneg)
    if res.status != "optimal":
        return res
    return LPResult("optimal", res.x, -res.value)


def feasible(A_ub=(), b_ub=(), A_eq=(), b_eq=(), nvars: int | None = None) -> tuple[Fraction, ...] | None:
    """Some point of the polyhedron, or None when it is empty."""
    if nvars is None:
        nvars = len(A_ub[0]) if A_ub else len(A_eq[0])
    res = maximize([0] * nvars, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.optimal else None


def implied_upper(row, rhs, A_ub=(), b_ub=(), A_eq=(), b_eq=(), nonneg=False) -> bool:
    """Does the system force ``row . x <= rhs``? (True for empty systems.)"""
    res = maximize(row, A_ub, b_ub, A_eq, b_eq, nonneg)
    if res.status == "infeasible":
        return True
    if res.status == "unbounded":
        return False
    return res.value <= q(rhs)


def hrep_contains(outer, inner, nonneg=False) -> bool:
    """Is polyhedron ``inner`` contained in ``outer``?

    Both are given as ``(A_ub, b_ub, A_eq, b_eq)`` tuples over the same variables.
    With ``nonneg`` both are additionally intersected with the nonnegative orthant.
    """
    A_ub, b_ub, A_eq, b_eq = inner
    oA_ub, ob_ub, oA_eq, ob_eq = outer
    for a, b in zip(oA_ub, ob_ub):
        if not implied_upper(a, b, A_ub, b_ub, A_eq, b_eq, nonneg):
            return False
    for a, b in zip(oA_eq, ob_eq):
        if not implied_upper(a, b, A_ub, b_ub, A_eq, b_eq, nonneg):
            return False
        if not implied_upper([-q(x) for x in a], -q(b), A_ub, b_ub, A_eq, b_eq, nonneg):
            return False
    return True


def hrep_equal(P, Q, nonneg=False) -> bool:
    return hrep_contains(P, Q, nonneg) and hrep_contains(Q, P, nonneg)


def affine_dimension(nvars: int, A_ub=(), b_ub=(), A_eq=(), b_eq=(), nonneg=False) -> int:
    """Dimension of a polyhedron, or -1 when it is empty.

    Finds the implicit equalities (inequalities tight on the whole polyhedron)
    by one LP each and subtracts the rank of all equalities from ``nvars``.
    With ``nonneg`` the sign constraints x_i >= 0 are tested as well.
    """
    from .rational import rank

    if nonneg:
        if maximize([0] * nvars, A_ub, b_ub, A_eq, b_eq, True).status == "infeasible":
            return -1
    elif feasible(A_ub, b_ub, A_eq, b_eq, nvars) is None:
        return -1
    eqs = [[q(x) for x in a] for a in A_eq]
    for a, b in zip(A_ub, b_ub):
        res = minimize(a, A_ub, b_ub, A_eq, b_eq, nonneg)
        if res.optimal and res.value == q(b):
            eqs.append([q(x) for x in a])
    if nonneg:
        for i in range(nvars):
            row = [Fraction(int(j == i)) for j in range(nvars)]
            res = maximize(row, A_ub, b_ub, A_eq, b_eq, True)
            if res.optimal and res.value == 0:
                eqs.append(row)
    return nvars - rank(eqs)
