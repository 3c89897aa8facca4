"""Exact linear algebra over the rationals.

Matrices are lists of lists of Fraction.  Everything here is small and
dense; the point is certainty, not speed: ranks, nullspaces and span
memberships computed below are proofs for the solvers built on top.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def _copy(matrix) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in matrix]


def rref(matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = _copy(matrix)
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def primitive(vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale to coprime integers with positive leading entry."""
    denoms = 1
    for v in vector:
        denoms = denoms * v.denominator // gcd(denoms, v.denominator)
    ints = [int(v * denoms) for v in vector]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return tuple(Fraction(0) for _ in vector)
    lead = next(v for v in ints if v)
    sign = -1 if lead < 0 else 1
    return tuple(Fraction(sign * v, g) for v in ints)


def nullspace(matrix, ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the right nullspace, canonical (primitive, fixed order)."""
    if not matrix:
        ident = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            ident.append(tuple(v))
        return ident
    red, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(primitive(v))
    return basis


def solve_exact(matrix, rhs) -> list[Fraction] | None:
    """One solution of M x = rhs, or None when inconsistent."""
    if not matrix:
        return None
    cols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def in_span(basis_columns, target) -> list[Fraction] | None:
    """Coefficients expressing target in the given column span, else None."""
    if not basis_columns:
        return [] if not any(target) else None
    nrows = len(basis_columns[0])
    matrix = [[col[i] for col in basis_columns] for i in range(nrows)]
    return solve_exact(matrix, list(target))


def span_dim(vectors) -> int:
    vecs = [list(v) for v in vectors]
    return rank(vecs) if vecs else 0


def span_contains(basis, vectors) -> bool:
    cols = [list(b) for b in basis]
    return all(in_span(cols, list(v)) is not None for v in vectors)


def span_equal(a, b) -> bool:
    return span_contains(a, b) and span_contains(b, a)
