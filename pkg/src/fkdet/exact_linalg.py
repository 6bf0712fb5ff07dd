"""Exact dense linear algebra over the integers and rationals.

Matrices are lists of rows holding int or Fraction entries; the sizes
here come from regular representations of modest finite groups, so
clarity wins over asymptotics.  Determinants use Bareiss fraction-free
elimination (intermediate values stay integral), characteristic
polynomials use the division-free Berkowitz scheme, and ranks come from
Gaussian elimination over the rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Row = list
Matrix = list


def mat_transpose(rows: Matrix) -> Matrix:
    return [list(col) for col in zip(*rows)] if rows else []


def mat_mul_exact(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    bt = mat_transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _clear_denominators(rows: Matrix) -> tuple[Matrix, int]:
    """Scale each row to integers; returns the int matrix and the product of scales."""
    out = []
    total = 1
    for row in rows:
        scale = 1
        for x in row:
            if isinstance(x, Fraction):
                d = x.denominator
                scale = scale * d // gcd(scale, d)
        total *= scale
        out.append([int(x * scale) for x in row])
    return out, total


def _bareiss_det(a: Matrix) -> int:
    """Exact determinant of a square integer matrix, fraction-free."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            row_k = a[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                # exact by the Bareiss identity: prev divides the 2x2 minor
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_exact(rows: Matrix):
    """Exact determinant of a square int/Fraction matrix (int when possible)."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    ints, scale = _clear_denominators(rows)
    d = _bareiss_det(ints)
    if scale == 1:
        return d
    return Fraction(d, scale)


def rank_exact(rows: Matrix) -> int:
    """Rank over the rationals by Gaussian elimination."""
    if not rows:
        return 0
    work = [[Fraction(x) for x in row] for row in rows]
    m, n = len(work), len(work[0])
    rank = 0
    for col in range(n):
        pivot_row = None
        for i in range(rank, m):
            if work[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        pivot = work[rank][col]
        for i in range(rank + 1, m):
            factor = work[i][col] / pivot
            if factor:
                row_i = work[i]
                row_r = work[rank]
                for j in range(col, n):
                    row_i[j] -= factor * row_r[j]
        rank += 1
        if rank == m:
            break
    return rank


def charpoly_berkowitz(rows: Matrix) -> list:
    """Coefficients of det(t*I - M), ascending in t, computed division-free.

    The result is monic (last coefficient 1) and exact: only additions and
    multiplications of the input entries occur, so integer matrices give
    integer coefficients.
    """
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix is not square")
    if n == 0:
        return [1]
    # v holds the coefficients for the leading principal r x r block,
    # ordered by descending power of t
    v = [1, -rows[0][0]]
    for r in range(2, n + 1):
        corner = rows[r - 1][r - 1]
        row_part = rows[r - 1][:r - 1]
        col_part = [rows[i][r - 1] for i in range(r - 1)]
        block = [row[:r - 1] for row in rows[:r - 1]]
        # first column of the (r+1) x r lower-triangular Toeplitz update:
        # 1, -corner, then -row_part . block^j . col_part for j = 0..r-2
        col = [1, -corner]
        w = col_part
        for _ in range(r - 1):
            col.append(-sum(x * y for x, y in zip(row_part, w)))
            w = [sum(x * y for x, y in zip(block_row, w)) for block_row in block]
        new_v = []
        for i in range(r + 1):
            acc = 0
            for j in range(min(i, r - 1) + 1):
                acc += col[i - j] * v[j]
            new_v.append(acc)
        v = new_v
    v.reverse()
    return v
