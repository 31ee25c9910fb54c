"""Exact rational helpers: parsing, formatting and a small Gaussian-elimination kernel.

Every matrix here is a list of rows, each row a list of :class:`fractions.Fraction`.
Nothing in this module ever produces a float.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Row = list[Fraction]
Matrix = list[Row]


def q(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: they would smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt(x: Fraction | int) -> str:
    """Format a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    return str(Fraction(x))


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[q(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form.

    Returns the nonzero rows of the RREF together with their pivot columns.
    Pivoting takes the first nonzero entry in each column, so the output is
    canonical for the row space.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    if ncols is None:
        ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = [x * inv for x in pr]
            m[r] = pr
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f != 0:
                    mi = m[i]
                    m[i] = [a - f * b for a, b in zip(mi, pr)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank by forward elimination only (cheaper than a full RREF)."""
    m = [list(r) for r in rows if any(x != 0 for x in r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f != 0:
                f = f / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis of ``{x : A x = 0}``, one basis vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(rows, ncols)
    pivset = set(piv)
    basis: Matrix = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Row | None:
    """One solution of ``A x = b`` (free variables set to zero), or None."""
    if not A:
        return None if any(x != 0 for x in b) else []
    n = len(A[0])
    aug = [list(r) + [q(bi)] for r, bi in zip(A, b)]
    red, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, piv):
        x[pc] = row[n]
    return x


def det(M: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(r) for r in M]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        pc = m[c][c]
        d *= pc
        for i in range(c + 1, n):
            f = m[i][c]
            if f != 0:
                f = f / pc
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def inverse(M: Sequence[Sequence[Fraction]]) -> Matrix | None:
    n = len(M)
    aug = [list(M[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = rref(aug, 2 * n)
    if len(piv) < n or piv[n - 1] != n - 1:
        return None
    return [row[n:] for row in red]


def matvec(M: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Row:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def row_space_equal(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]], ncols: int) -> bool:
    return rref(A, ncols)[0] == rref(B, ncols)[0]
