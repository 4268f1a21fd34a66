"""Generic square-matrix helpers over any exact ring.

Entries only need +, -, *, truthiness for zero tests, and (for elimination)
an invert callable. Shared by the residue and rational matrix types.
"""

from __future__ import annotations

from .errors import NonUnit, SingularPivot


def identity_rows(n, zero, one):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def transpose(rows):
    n = len(rows)
    return tuple(tuple(rows[j][i] for j in range(n)) for i in range(n))


def mat_mul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = a[i][0] * b[0][j]
            for k in range(1, n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def det_expansion(rows):
    """Cofactor expansion along the first row: division-free, exact."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        minor = tuple(r[:j] + r[j + 1:] for r in rows[1:])
        term = rows[0][j] * det_expansion(minor)
        if acc is None:
            acc = term
        elif j % 2 == 0:
            acc = acc + term
        else:
            acc = acc - term
    return acc


def det_elimination(rows, invert):
    """Gaussian elimination with invertible pivots.

    Raises SingularPivot when a column is nonzero but no entry in it is a
    unit (possible over rings); callers may then fall back to expansion.
    """
    n = len(rows)
    work = [list(r) for r in rows]
    zero = rows[0][0] - rows[0][0]
    sign_flip = False
    pivots = []
    for col in range(n):
        pivot_row = None
        pivot_inv = None
        saw_nonzero = False
        for r in range(col, n):
            e = work[r][col]
            if not e:
                continue
            saw_nonzero = True
            try:
                pivot_inv = invert(e)
            except (NonUnit, ZeroDivisionError):
                continue
            pivot_row = r
            break
        if pivot_row is None:
            if saw_nonzero:
                raise SingularPivot(f"no unit pivot in column {col}")
            return zero
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            sign_flip = not sign_flip
        pivots.append(work[col][col])
        for r in range(col + 1, n):
            factor = work[r][col] * pivot_inv
            if not factor:
                continue
            for c in range(col, n):
                work[r][c] = work[r][c] - factor * work[col][c]
    det = pivots[0]
    for p in pivots[1:]:
        det = det * p
    return -det if sign_flip else det
