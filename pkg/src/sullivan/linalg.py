"""Exact sparse linear algebra over Q.

Vectors are dicts {index: value}.  Rank uses fraction-free integer
elimination; kernels and coordinates use Fraction row reduction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _integer_row(v: dict) -> dict:
    den = 1
    for x in v.values():
        den = lcm(den, Fraction(x).denominator)
    row = {k: int(Fraction(x) * den) for k, x in v.items() if x}
    g = 0
    for x in row.values():
        g = gcd(g, x)
    if g > 1:
        row = {k: x // g for k, x in row.items()}
    return row


def sparse_rank(vectors) -> int:
    """Rank of a family of sparse rational vectors.

    Each vector is scaled to a primitive integer row; elimination keeps rows
    integral (r <- p*r - c*pivot) and divides out the content after every
    step.  Sparsest rows are taken first.
    """
    rows = [_integer_row(v) for v in vectors]
    rows = [r for r in rows if r]
    rows.sort(key=len)
    pivots: dict = {}
    rank = 0
    for r in rows:
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                rank += 1
                break
            a, b = p[c], r[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * x for k, x in r.items()}
            for k, x in p.items():
                y = new.get(k, 0) - b * x
                if y:
                    new[k] = y
                else:
                    new.pop(k, None)
            cont = 0
            for x in new.values():
                cont = gcd(cont, x)
                if cont == 1:
                    break
            if cont > 1:
                new = {k: x // cont for k, x in new.items()}
            r = new
    return rank


def _axpy(v: dict, a: Fraction, w: dict) -> None:
    """v += a*w in place."""
    for k, x in w.items():
        y = v.get(k, 0) + a * x
        if y:
            v[k] = y
        else:
            v.pop(k, None)


def rref(rows) -> tuple:
    """Reduced row echelon form; returns (rows, pivot columns) sorted by pivot."""
    work = [{k: Fraction(x) for k, x in r.items() if x} for r in rows]
    pivots: dict = {}
    for r in work:
        for c, row in pivots.items():
            if c in r:
                _axpy(r, -r[c], row)
        if not r:
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {k: x * inv for k, x in r.items()}
        for c2, row in pivots.items():
            if c in row:
                _axpy(row, -row[c], r)
        pivots[c] = r
    cols = sorted(pivots)
    return [pivots[c] for c in cols], cols


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(rows, ncols: int) -> list:
    """Basis of {x : r.x = 0 for all rows r}, one vector per free column."""
    red, piv = rref(rows)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for row, c in zip(red, piv):
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def transpose(columns, nrows=None) -> list:
    """Rows of the matrix whose columns are the given sparse vectors."""
    if nrows is None:
        nrows = 1 + max((k for c in columns for k in c), default=-1)
    rows = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, x in col.items():
            rows[i][j] = x
    return rows


class TaggedEchelon:
    """Row echelon form whose rows carry a coordinate tag vector.

    Used to pick complement bases and read off coordinates modulo a
    subspace: rows inserted with tag 0 span the subspace being quotiented.
    """

    def __init__(self):
        self.rows: dict = {}  # leading column -> (row, tag)

    def reduce(self, v: dict):
        """Return (remainder, accumulated tag) with v = remainder + sum(rows used)."""
        v = {k: Fraction(x) for k, x in v.items() if x}
        tag: dict = {}
        while v:
            c = min(v)
            hit = self.rows.get(c)
            if hit is None:
                break
            row, rtag = hit
            a = v[c] / row[c]
            _axpy(v, -a, row)
            _axpy(tag, a, rtag)
        return v, tag

    def insert(self, v: dict, tag: dict) -> bool:
        """Insert v (with tag); False when v was already in the span."""
        rem, used = self.reduce(v)
        if not rem:
            return False
        t = dict(tag)
        _axpy(t, Fraction(-1), used)
        self.rows[min(rem)] = (rem, t)
        return True


def dense_to_sparse(row) -> dict:
    return {j: Fraction(x) for j, x in enumerate(row) if x}


def sparse_to_dense(v: dict, n: int) -> list:
    return [v.get(j, Fraction(0)) for j in range(n)]


def mat_mul(A, B) -> list:
    """Dense product of list-of-lists matrices."""
    n, m = len(A), len(B[0]) if B else 0
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(m)]
            for i in range(n)]


def inverse(A) -> list:
    """Dense Gauss-Jordan inverse over Q; raises ValueError if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]
