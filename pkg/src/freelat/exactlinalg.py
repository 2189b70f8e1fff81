"""Exact linear algebra over the rationals and the integers.

Small dense matrices only (rank <= ~12): plain Gaussian elimination with
Fraction arithmetic is both simple and fast enough at this size.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import ValidationError
from .intmath import xgcd


def frac_det(rows):
    """Determinant of a square matrix of Fractions."""
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        pivot = m[c][c]
        det *= pivot
        for r in range(c + 1, n):
            f = m[r][c] / pivot
            if f:
                row, src = m[r], m[c]
                for cc in range(c, n):
                    row[cc] -= f * src[cc]
    return det


def frac_inverse(rows):
    """Inverse of a square matrix of Fractions (raises if singular)."""
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ValidationError("matrix is singular")
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [tuple(row[n:]) for row in m]


def ldl_decompose(gram):
    """Exact LDL^T of a symmetric positive-definite Fraction matrix.

    Returns (diag, rows) with gram = R^T diag R, R unit upper triangular.
    Raises ValidationError on a non-positive pivot, so this doubles as the
    positive-definiteness check (all leading principal minors > 0).
    """
    n = len(gram)
    a = [list(map(Fraction, row)) for row in gram]
    diag = []
    upper = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
             for i in range(n)]
    for i in range(n):
        d = a[i][i]
        if d <= 0:
            raise ValidationError("matrix is not positive definite")
        diag.append(d)
        for j in range(i + 1, n):
            upper[i][j] = a[i][j] / d
        for r in range(i + 1, n):
            f = a[i][r] / d  # equals a[r][i] by symmetry
            if f:
                row, src = a[r], a[i]
                for c in range(i + 1, n):
                    row[c] -= f * src[c]
    return diag, upper


def rank_of_int_rows(rows):
    """Rank over Q of a list of integer coordinate vectors."""
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pivot = m[rank][c]
        for r in range(rank + 1, len(m)):
            f = m[r][c] / pivot
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def int_minor_gcd(rows, k):
    """gcd of all k x k minors of an integer matrix with k rows.

    Equals the product of the elementary divisors, i.e. the index of the
    row span inside its saturation.
    """
    if len(rows) != k:
        raise ValueError("expected exactly k rows")
    cols = len(rows[0])
    g = 0
    for sel in combinations(range(cols), k):
        sub = [[row[c] for c in sel] for row in rows]
        g = gcd(g, abs(int_det(sub)))
        if g == 1:
            return 1
    return g


def int_det(rows):
    """Determinant of a small square integer matrix (Bareiss, exact)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for c in range(n - 1):
        if m[c][c] == 0:
            piv = next((r for r in range(c + 1, n) if m[r][c]), None)
            if piv is None:
                return 0
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for r in range(c + 1, n):
            for cc in range(c + 1, n):
                m[r][cc] = (m[r][cc] * m[c][c] - m[r][c] * m[c][cc]) // prev
            m[r][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def gram_matrix(vectors, gram):
    """Fraction Gram matrix <v_i, v_j> of integer vectors under `gram`."""
    transformed = [apply_gram(gram, v) for v in vectors]
    return [
        tuple(sum(Fraction(vi) * wj for vi, wj in zip(v, tw)) for tw in transformed)
        for v in vectors
    ]


def apply_gram(gram, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in gram)


def inner(gram, u, v):
    """Bilinear form u^T gram v for integer vectors."""
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            total += ui * sum(row[j] * v[j] for j in range(len(v)) if v[j])
    return total


def unimodular_completion(v):
    """Integer matrix with first row v (primitive) and determinant +-1.

    Built by induction on the length: complete the primitive part of the
    leading coordinates, then splice in a Bezout row for the last one.
    """
    v = tuple(int(x) for x in v)
    m = len(v)
    from .intmath import vec_gcd

    if vec_gcd(v) != 1:
        raise ValidationError("completion needs a primitive vector")
    if m == 1:
        return [(v[0],)]
    g = vec_gcd(v[:-1])
    if g == 0:
        # v = (0, ..., 0, +-1)
        rows = [v]
        for i in range(m - 1):
            e = [0] * m
            e[i] = 1
            rows.append(tuple(e))
        return rows
    u = tuple(x // g for x in v[:-1])
    inner_rows = unimodular_completion(u)
    _, s, t = xgcd(g, v[-1])  # s*g + t*v_last = 1
    rows = [v]
    for r in inner_rows[1:]:
        rows.append(tuple(r) + (0,))
    rows.append(tuple(-t * x for x in u) + (s,))
    return rows
