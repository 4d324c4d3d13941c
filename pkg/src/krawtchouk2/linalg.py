"""Exact dense linear algebra over rationals: row echelon and nullspaces.

Small and purpose-built; the matrices here are stationary-distribution
systems and 3x3 eigenvector problems, so cubic elimination with exact
pivoting is entirely adequate.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SingularSystemError


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (in place on a copy) and the pivot columns."""
    m = [list(row) for row in rows]
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot_row = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        scale = m[r][c]
        m[r] = [value / scale for value in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right nullspace of the matrix, as exact rational vectors."""
    if not rows:
        return []
    reduced, pivots = rref(rows)
    n_cols = len(rows[0])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n_cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -reduced[r][f]
        basis.append(vec)
    return basis


def solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Unique solution of a square nonsingular system."""
    n = len(rows)
    augmented = [list(row) + [value] for row, value in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if pivots != list(range(n)):
        raise SingularSystemError("linear system is singular")
    return [reduced[i][n] for i in range(n)]
