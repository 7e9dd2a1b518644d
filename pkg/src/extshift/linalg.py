"""Dense exact Gaussian elimination over a :class:`~extshift.tfield.Field`.

Rows are Python lists of field elements.  All routines return fresh lists and
leave their inputs untouched.
"""

from __future__ import annotations

from typing import Sequence

from .tfield import Field

__all__ = ["rref", "reduce_vector", "left_kernel", "rank", "inverse", "solve_left"]


def rref(F: Field, rows: Sequence[Sequence], ncols: int | None = None,
         pivot_limit: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form with unit pivots.

    Pivots are searched only among the first ``pivot_limit`` columns; row
    operations act on the full width.  Zero rows are dropped unless
    ``pivot_limit`` is set (then rows without a pivot are kept at the end so
    callers can read off augmented data).
    """
    work = [list(r) for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(limit):
        if r == nrows:
            break
        sel = None
        for s in range(r, nrows):
            if work[s][c] != 0:
                sel = s
                break
        if sel is None:
            continue
        if sel != r:
            work[r], work[sel] = work[sel], work[r]
        prow = work[r]
        lead = prow[c]
        if lead != F.one:
            prow = prow[:c] + F.scale(prow[c:], F.inv(lead))
            work[r] = prow
        tail = prow[c:]
        for s in range(nrows):
            if s != r:
                f = work[s][c]
                if f != 0:
                    row = work[s]
                    row[c:] = F.axpy(row[c:], f, tail)
        pivots.append(c)
        r += 1
    if pivot_limit is None:
        work = work[:r]
    return work, pivots


def reduce_vector(F: Field, v: Sequence, rows: Sequence[Sequence], pivots: Sequence[int]) -> list:
    """Residual of ``v`` modulo an RREF basis (zero iff ``v`` lies in the span)."""
    out = list(v)
    for row, p in zip(rows, pivots):
        f = out[p]
        if f != 0:
            out = F.axpy(out, f, row)
    return out


def left_kernel(F: Field, rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis (in RREF) of ``{c : sum_r c_r rows[r] = 0}``."""
    m = len(rows)
    if m == 0:
        return []
    if ncols is None:
        ncols = len(rows[0])
    aug = []
    for r, row in enumerate(rows):
        unit = [F.zero] * m
        unit[r] = F.one
        aug.append(list(row) + unit)
    red, piv = rref(F, aug, ncols + m, pivot_limit=ncols)
    kern = [row[ncols:] for row in red[len(piv):]]
    kern, _ = rref(F, kern, m)
    return kern


def rank(F: Field, rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(F, rows)[1])


def inverse(F: Field, matrix: Sequence[Sequence]) -> list[list]:
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    n = len(matrix)
    aug = []
    for r, row in enumerate(matrix):
        unit = [F.zero] * n
        unit[r] = F.one
        aug.append(list(row) + unit)
    red, piv = rref(F, aug, 2 * n, pivot_limit=n)
    if len(piv) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def solve_left(F: Field, rows: Sequence[Sequence], target: Sequence) -> list | None:
    """Some ``c`` with ``sum_r c_r rows[r] = target``, or ``None``."""
    m = len(rows)
    ncols = len(target)
    aug = []
    for r, row in enumerate(rows):
        unit = [F.zero] * m
        unit[r] = F.one
        aug.append(list(row) + unit)
    red, piv = rref(F, aug, ncols + m, pivot_limit=ncols)
    res = list(target)
    coeffs = [F.zero] * m
    for row, p in zip(red, piv):
        f = res[p]
        if f != 0:
            res = F.axpy(res, f, row[:ncols])
            coeffs = F.axpy(coeffs, F.neg(f), row[ncols:])
    if any(x != 0 for x in res):
        return None
    return coeffs
