"""Exact linear algebra over Q and Z used by the Jacobian and abelian counts."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import InvalidInput

Matrix = list[list[Fraction]]


def solve(a: Matrix, b: list[Fraction]) -> list[Fraction]:
    """Solve a·x = b for square nonsingular ``a`` by Gauss-Jordan elimination."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise InvalidInput("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def mat_vec(a: Matrix, x: list[Fraction]) -> list[Fraction]:
    return [sum((row[j] * x[j] for j in range(len(x))), Fraction(0)) for row in a]


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester's criterion via exact fraction-free LDLᵀ pivots."""
    n = len(a)
    m = [[Fraction(v) for v in row] for row in a]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return True


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, in divisibility order."""
    m = [list(map(int, r)) for r in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(nr, nc):
        entries = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if m[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            for i in range(t + 1, nr):
                q = m[i][t] // m[t][t]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, nc):
                q = m[t][j] // m[t][t]
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                if m[t][j]:
                    done = False
            if done:
                # pivot must divide the remaining block, otherwise fold a row in
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if m[i][j] % m[t][t]), None)
                if bad is None:
                    break
                m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
                continue
            entries = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc)
                       if m[i][j] and (i == t or j == t)]
            _, pi, pj = min(entries)
            m[t], m[pi] = m[pi], m[t]
            for row in m:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(m[t][t]))
        t += 1
    return diag


def count_hom_to_cyclic(relations: list[list[int]], ngens: int, n: int) -> int:
    """|Hom(Z^ngens / rowspace(relations), Z/n)| from the Smith normal form."""
    factors = smith_diagonal(relations) if relations else []
    free_rank = ngens - len(factors)
    count = n**free_rank
    for s in factors:
        count *= gcd(s, n)
    return count
