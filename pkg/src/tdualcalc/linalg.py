"""Small exact linear algebra over Q(i) (row reduction, det, solve)."""

from __future__ import annotations

from .gauss import QI


def _copy(m):
    return [[QI.coerce(v) for v in row] for row in m]


def rref(m):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def det(m) -> QI:
    a = _copy(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    out = QI(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return QI(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        out = out * a[c][c]
        inv = a[c][c].inverse()
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return out


def solve(m, b):
    """One solution of ``m x = b`` (free variables set to zero), or None."""
    if not m:
        return []
    aug = [list(row) + [bv] for row, bv in zip(m, b)]
    red, piv = rref(aug)
    ncols = len(m[0])
    if ncols in piv:
        return None
    x = [QI(0)] * ncols
    for i, c in enumerate(piv):
        x[c] = red[i][ncols]
    return x


def nullity(m, ncols: int) -> int:
    return ncols - rank(m) if m else ncols


def inverse(m):
    n = len(m)
    aug = [list(row) + [QI(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def int_det(m) -> int:
    d = det(m)
    return int(d.re)


def int_inverse(m):
    """Inverse of a unimodular integer matrix, as integers."""
    inv = inverse(m)
    out = []
    for row in inv:
        if any(v.im or v.re.denominator != 1 for v in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(v.re) for v in row])
    return out
