"""Small exact linear-algebra kernels over the rationals.

Dense matrices are lists of rows; polynomials are coefficient lists, constant
term first.  Everything is exact: integers where possible, Fractions
otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Sequence

Poly = list[Fraction]


def clear_denominators(row: Sequence[Rational]) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    den = 1
    for x in row:
        den = lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in row]


def fraction_free_echelon(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Bareiss row echelon form of an integer matrix.

    Returns the nonzero echelon rows and their pivot columns.  Every division
    performed is exact, so intermediate entries stay integral minors.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    pivots: list[int] = []
    for col in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][col]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[col]
            for j in range(col + 1, ncols):
                row[j] = (piv * row[j] - a * prow[j]) // prev
            row[col] = 0
        # rows above the pivot row that were not touched keep their scale;
        # Bareiss only needs the previous pivot for the rows below.
        prev = piv
        pivots.append(col)
        r += 1
    return m[:r], pivots


def reduced_row_echelon(rows: Sequence[Sequence[Rational]]) -> tuple[list[list[Fraction]], list[int]]:
    """Exact RREF: fraction-free forward pass, rational back-substitution."""
    ints = [clear_denominators(r) for r in rows]
    ech, pivots = fraction_free_echelon(ints)
    red = [[Fraction(x, row[p]) for x in row] for row, p in zip(ech, pivots)]
    for i in range(len(red) - 1, -1, -1):
        p = pivots[i]
        for k in range(i):
            f = red[k][p]
            if f:
                rk, ri = red[k], red[i]
                for j in range(p, len(rk)):
                    if ri[j]:
                        rk[j] -= f * ri[j]
    return red, pivots


def rank(rows: Sequence[Sequence[Rational]]) -> int:
    return len(fraction_free_echelon([clear_denominators(r) for r in rows])[1])


def hessenberg(matrix: Sequence[Sequence[Rational]]) -> list[list[Fraction]]:
    """Upper Hessenberg form by exact elementary similarity transforms."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    for m in range(1, n - 1):
        p = next((i for i in range(m, n) if a[i][m - 1] != 0), None)
        if p is None:
            continue
        if p != m:
            a[p], a[m] = a[m], a[p]
            for row in a:
                row[p], row[m] = row[m], row[p]
        piv = a[m][m - 1]
        for i in range(m + 1, n):
            t = a[i][m - 1] / piv
            if not t:
                continue
            ri, rm = a[i], a[m]
            for j in range(m - 1, n):
                if rm[j]:
                    ri[j] -= t * rm[j]
            for row in a:
                if row[i]:
                    row[m] += t * row[i]
    return a


def charpoly(matrix: Sequence[Sequence[Rational]]) -> Poly:
    """det(t - A) as coefficients, constant term first."""
    h = hessenberg(matrix)
    n = len(h)
    polys: list[Poly] = [[Fraction(1)]]
    for k in range(n):
        # (t - h[k][k]) * p_{k-1}
        prev = polys[-1]
        cur = [Fraction(0)] + prev
        for j, c in enumerate(prev):
            cur[j] -= h[k][k] * c
        sub = Fraction(1)
        for i in range(k - 1, -1, -1):
            sub *= h[i + 1][i]
            if not sub:
                break
            coef = h[i][k] * sub
            if coef:
                for j, c in enumerate(polys[i]):
                    cur[j] -= coef * c
        polys.append(cur)
    return polys[-1]


def poly_mul(a: Sequence[Rational], b: Sequence[Rational]) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_from_roots(roots: Sequence[Rational]) -> Poly:
    out: Poly = [Fraction(1)]
    for r in roots:
        out = poly_mul(out, [-Fraction(r), Fraction(1)])
    return out


def integer_roots(poly: Sequence[Rational], bound: int) -> tuple[list[int], Poly]:
    """Peel off integer roots in ``[-bound, bound]`` with multiplicity.

    Returns the sorted roots and the leftover cofactor (``[1]`` when the
    polynomial splits completely over those integers).
    """
    p = [Fraction(c) for c in poly]
    roots: list[int] = []
    for x in range(-bound, bound + 1):
        while len(p) > 1:
            # synthetic division by (t - x)
            q = [Fraction(0)] * (len(p) - 1)
            acc = Fraction(0)
            for i in range(len(p) - 1, 0, -1):
                acc = acc * x + p[i]
                q[i - 1] = acc
            if acc * x + p[0] != 0:
                break
            roots.append(x)
            p = q
    return roots, p
