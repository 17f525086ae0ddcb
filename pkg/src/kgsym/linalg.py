"""Exact linear algebra over the expression field.

Gaussian elimination with symbolic entries; pivots are chosen on structural
nonzero-ness, so symbolic constants (a, b, ...) are treated as generic
nonzero values, matching how the source tables quantify them.
"""

from __future__ import annotations

from .kernel import Expr, ZERO, ONE

__all__ = ["solve_linear", "nullspace", "rank"]


def solve_linear(rows: list[list[Expr]], rhs: list[Expr]) -> list[Expr] | None:
    """Solve rows * c = rhs exactly.  Returns one solution (free unknowns set
    to zero) or None when the system is inconsistent."""
    if len(rows) != len(rhs):
        raise ValueError("row/rhs length mismatch")
    if not rows:
        return []
    ncols = len(rows[0])
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != ZERO), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col]
        a[r] = [v / inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != ZERO:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
        if r == len(a):
            break
    for i in range(r, len(a)):
        if a[i][ncols] != ZERO:
            return None
    sol = [ZERO] * ncols
    for i, col in enumerate(piv_cols):
        sol[col] = a[i][ncols]
    return sol


def _rref(rows: list[list[Expr]]) -> tuple[list[list[Expr]], list[int]]:
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    piv_cols: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != ZERO), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col]
        a[r] = [v / inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != ZERO:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
        if r == len(a):
            break
    return a, piv_cols


def rank(rows: list[list[Expr]]) -> int:
    return len(_rref(rows)[1])


def nullspace(rows: list[list[Expr]]) -> list[list[Expr]]:
    """Basis of the right nullspace (free unknowns set to 1 one at a time)."""
    if not rows:
        return []
    ncols = len(rows[0])
    a, piv_cols = _rref(rows)
    free = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(piv_cols):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis
