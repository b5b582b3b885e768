"""Exact linear algebra over the rationals and the integers: Gaussian
elimination, determinants, Smith normal form, and a small two-phase simplex
for LP feasibility questions. No floating point anywhere."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence


def solve_exact(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One exact solution of A x = b, or None if the system is inconsistent.
    The system may be over- or under-determined; free variables are set to 0."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    a = [list(matrix[r]) + [rhs[r]] for r in range(rows)]
    pivot_cols: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c]
        a[r] = [v / inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [v - factor * w for v, w in zip(a[i], a[r])]
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if a[i][cols] != 0:
            return None
    solution = [Fraction(0)] * cols
    for row, c in enumerate(pivot_cols):
        solution[c] = a[row][cols]
    return solution


def rank_exact(matrix: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(r) for r in matrix]
    n_rows = len(rows)
    cols = len(rows[0]) if n_rows else 0
    rank = 0
    for c in range(cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(n_rows):
            if i != rank and rows[i][c] != 0:
                factor = rows[i][c] / rows[rank][c]
                rows[i] = [v - factor * w for v, w in zip(rows[i], rows[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(matrix)
    a = [list(row) for row in matrix]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        inv = a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                factor = a[i][c] / inv
                a[i] = [v - factor * w for v, w in zip(a[i], a[c])]
    return det


def smith_divisors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """The nonzero elementary divisors of an integer matrix, in division
    order. Textbook reduction: move a minimal entry to the pivot, clear its
    row and column, fix up divisibility violations, recurse."""
    a = [list(row) for row in matrix]
    rows, cols = len(a), len(a[0]) if a else 0
    divisors: List[int] = []
    top = 0
    while top < rows and top < cols:
        # find the entry of least absolute value in the working block
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[top], a[i] = a[i], a[top]
        for row in a:
            row[top], row[j] = row[j], row[top]
        pivot = a[top][top]
        dirty = False
        for i in range(top + 1, rows):
            q = a[i][top] // pivot
            if q:
                a[i] = [v - q * w for v, w in zip(a[i], a[top])]
            if a[i][top]:
                dirty = True
        for j in range(top + 1, cols):
            q = a[top][j] // pivot
            if q:
                for row in a:
                    row[j] -= q * row[top]
            if a[top][j]:
                dirty = True
        if dirty:
            continue
        # pivot must divide the rest of the block
        offender = None
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if a[i][j] % pivot:
                    offender = i
                    break
            if offender:
                break
        if offender is not None:
            a[top] = [v + w for v, w in zip(a[top], a[offender])]
            continue
        divisors.append(abs(pivot))
        top += 1
    return divisors


# --- exact LP ----------------------------------------------------------------


def lp_maximize(
    a_eq: Sequence[Sequence[Fraction]],
    b_eq: Sequence[Fraction],
    objective: Sequence[Fraction],
) -> Optional[Fraction]:
    """max c.x subject to A x = b, x >= 0, all exact. Returns None when
    infeasible. The feasible sets used here are always bounded, so no
    unbounded handling is exposed."""
    rows = len(a_eq)
    cols = len(objective)
    a = [list(map(Fraction, row)) for row in a_eq]
    b = list(map(Fraction, b_eq))
    for i in range(rows):
        if b[i] < 0:
            a[i] = [-v for v in a[i]]
            b[i] = -b[i]
    # phase 1: artificial basis
    tableau = [a[i] + [Fraction(1) if j == i else Fraction(0) for j in range(rows)] + [b[i]] for i in range(rows)]
    basis = [cols + i for i in range(rows)]
    cost = [Fraction(0)] * cols + [Fraction(1)] * rows
    value = _simplex_min(tableau, basis, cost, cols + rows)
    if value != 0:
        return None
    _drive_out_artificials(tableau, basis, cols)
    # phase 2 on the original columns; rows still basic in an artificial are
    # redundant zero rows and can be dropped
    keep = [i for i in range(rows) if basis[i] < cols]
    tableau = [tableau[i][:cols] + [tableau[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    cost = [-Fraction(c) for c in objective]  # minimise the negation
    value = _simplex_min(tableau, basis, cost, cols)
    return -value


def _simplex_min(tableau, basis, cost, width) -> Fraction:
    rows = len(tableau)
    while True:
        # reduced costs under the current basis
        y = [cost[basis[i]] for i in range(rows)]
        entering = None
        for j in range(width):
            if j in basis:
                continue
            reduced = cost[j] - sum(y[i] * tableau[i][j] for i in range(rows))
            if reduced < 0:
                entering = j  # Bland: first improving column
                break
        if entering is None:
            return sum(cost[basis[i]] * tableau[i][-1] for i in range(rows))
        leaving = None
        best = None
        for i in range(rows):
            if tableau[i][entering] > 0:
                ratio = tableau[i][-1] / tableau[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise ArithmeticError("LP unexpectedly unbounded")
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering


def _pivot(tableau, row, col) -> None:
    inv = tableau[row][col]
    tableau[row] = [v / inv for v in tableau[row]]
    for i in range(len(tableau)):
        if i != row and tableau[i][col] != 0:
            factor = tableau[i][col]
            tableau[i] = [v - factor * w for v, w in zip(tableau[i], tableau[row])]


def _drive_out_artificials(tableau, basis, cols) -> None:
    rows = len(tableau)
    for i in range(rows):
        if basis[i] >= cols:
            col = next((j for j in range(cols) if tableau[i][j] != 0), None)
            if col is not None:
                _pivot(tableau, i, col)
                basis[i] = col
            # a fully-zero row stays basic in an artificial at level zero
