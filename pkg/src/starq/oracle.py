"""Coefficients recomputed without the closed form.

The (alpha, beta, 0, 0) coefficients come from the recursion in K = k + l that
associativity forces, started at B_{0000} = 1 and closed with the symmetry
B_{0,b} = (-1)^b B_{b,0}.  Everything with gamma + delta > 0 is then obtained
by solving the two inversion-invariance systems exactly.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .explicit import admissible, in_range, index_tuples


@lru_cache(maxsize=None)
def stage1_by_recursion(n: int, K: int, alpha: int, beta: int) -> Fraction:
    """B_{alpha beta 00} at K = k + l from

    (r-j)(r-n-2K) C_{r-j,j}(K) + 1/2 (n+2K-2j-1) C_{r-j-1,j}(K-1) = 0.
    """
    if alpha < 0 or beta < 0 or alpha + beta > K:
        raise ValueError("need alpha, beta >= 0 and alpha + beta <= K")
    if alpha == 0 and beta == 0:
        return Fraction(1)
    if alpha == 0:
        return (-1) ** beta * stage1_by_recursion(n, K, beta, 0)
    r, j = alpha + beta, beta
    prev = stage1_by_recursion(n, K - 1, alpha - 1, beta)
    return -Fraction(n + 2 * K - 2 * j - 1, 2) * prev / ((r - j) * (r - n - 2 * K))


class OracleError(RuntimeError):
    """The inversion system was singular or inconsistent."""


@lru_cache(maxsize=None)
def solve_table(n: int, k: int, l: int) -> dict:
    """Full coefficient table for (n, k, l) from the recursions alone."""
    top = k + l
    known = {}
    unknowns = []
    for r in range(top + 1):
        for idx in index_tuples(r):
            if not in_range(k, l, *idx):
                continue
            if idx[2] == 0 and idx[3] == 0:
                known[idx] = stage1_by_recursion(n, top, idx[0], idx[1])
            else:
                unknowns.append(idx)
    if not unknowns:
        return known
    col = {idx: i for i, idx in enumerate(unknowns)}
    rows = []

    def equation(terms):
        # terms are (weight, index) pairs; known entries move to the right-hand side
        row = [Fraction(0)] * (len(unknowns) + 1)
        for w, idx in terms:
            if not w:
                continue
            if idx in col:
                row[col[idx]] += w
            elif idx in known:
                row[-1] -= w * known[idx]
        if any(row):
            rows.append(row)

    for r in range(top):
        for idx in index_tuples(r):
            a, b, c, d = idx
            if admissible(1, k, l, idx):
                equation([
                    ((a + 1) * (a + d - l), (a + 1, b, c, d)),
                    ((b + 1) * (b + d - l), (a, b + 1, c, d)),
                    (-(c + 1) * (n + 2 * k - c - 1), (a, b, c + 1, d)),
                    (-(a + 1) * (b + 1) if d else 0, (a + 1, b + 1, c, d - 1)),
                ])
            if admissible(2, k, l, idx):
                equation([
                    ((b + 1) * (b + c - k), (a, b + 1, c, d)),
                    ((a + 1) * (a + c - k), (a + 1, b, c, d)),
                    (-(d + 1) * (n + 2 * l - d - 1), (a, b, c, d + 1)),
                    (-(a + 1) * (b + 1) if c else 0, (a + 1, b + 1, c - 1, d)),
                ])
    m = len(unknowns)
    M = DomainMatrix([[QQ(v.numerator, v.denominator) for v in row] for row in rows], (len(rows), m + 1), QQ)
    R, pivots = M.rref()
    if m in pivots:
        raise OracleError(f"inconsistent system for n={n}, k={k}, l={l}")
    if list(pivots) != list(range(m)):
        raise OracleError(f"underdetermined system for n={n}, k={k}, l={l}")
    table = dict(known)
    for i, idx in enumerate(unknowns):
        v = R[i, m].element
        table[idx] = Fraction(int(v.numerator), int(v.denominator))
    return table


__all__ = ["OracleError", "solve_table", "stage1_by_recursion"]
