"""Row reduction over exact rationals and floats.

The exact path scales every row to integers and runs fraction-free (Bareiss)
elimination; only the final back-substitution to reduced echelon form uses
:class:`fractions.Fraction`. The float path is Gauss-Jordan with partial
pivoting, where a pivot ``|a| <= tol * max_abs_entry`` counts as zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for a in row:
            den = lcm(den, Fraction(a).denominator)
        out.append([int(Fraction(a) * den) for a in row])
    return out


def bareiss_echelon(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form. Returns the integer rows and pivot columns."""
    m = _integer_rows(rows)
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        piv = m[r][c]
        rowr = m[r]
        for i in range(r + 1, nrows):
            rowi = m[i]
            a = rowi[c]
            for j in range(c + 1, ncols):
                q, rem = divmod(piv * rowi[j] - a * rowr[j], prev)
                assert rem == 0
                rowi[j] = q
            rowi[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref_exact(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    ech, pivots = bareiss_echelon(rows, ncols)
    red = [[Fraction(a) for a in row] for row in ech]
    for i in range(len(red) - 1, -1, -1):
        c = pivots[i]
        piv = red[i][c]
        red[i] = [a / piv for a in red[i]]
        for k in range(i):
            f = red[k][c]
            if f:
                red[k] = [a - f * b for a, b in zip(red[k], red[i])]
    return red, pivots


def rref_float(rows: Sequence[Sequence[float]], ncols: int, tol: float) -> tuple[list[list[float]], list[int]]:
    m = [[float(a) for a in row] for row in rows]
    scale = max((abs(a) for row in m for a in row), default=0.0)
    if scale == 0.0:
        return [], []
    cutoff = tol * scale
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = max(range(r, nrows), key=lambda i: abs(m[i][c]))
        if abs(m[p][c]) <= cutoff:
            for i in range(r, nrows):
                m[i][c] = 0.0
            continue
        m[p], m[r] = m[r], m[p]
        piv = m[r][c]
        m[r] = [a / piv for a in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0.0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                m[i][c] = 0.0
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(rows, ncols: int, tol: float | None = None):
    """Reduced row echelon form; ``tol=None`` selects exact arithmetic."""
    if not rows:
        return [], []
    if tol is None:
        return rref_exact(rows, ncols)
    return rref_float(rows, ncols, tol)


def rank(rows, ncols: int, tol: float | None = None) -> int:
    if not rows:
        return 0
    if tol is None:
        return len(bareiss_echelon(rows, ncols)[1])
    return len(rref_float(rows, ncols, tol)[1])


def kernel_basis(rows, ncols: int, tol: float | None = None) -> list[list]:
    """Null space basis in reduced echelon parametrization.

    One vector per free column (ascending); it has 1 in that column, 0 in the
    other free columns and the negated reduced entries in the pivot columns.
    """
    red, pivots = rref(rows, ncols, tol)
    one, zero = (Fraction(1), Fraction(0)) if tol is None else (1.0, 0.0)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [zero] * ncols
        v[f] = one
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(v)
    return basis


def mat_vec(rows, v):
    return [sum(a * b for a, b in zip(row, v)) for row in rows]


def solve(rows, rhs, tol: float | None = None):
    """Solve ``rows @ x = rhs``; returns one solution (free variables zero) or None."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1, tol)
    if pivots and pivots[-1] == ncols:
        return None
    zero = Fraction(0) if tol is None else 0.0
    x = [zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = red[i][ncols]
    return x
