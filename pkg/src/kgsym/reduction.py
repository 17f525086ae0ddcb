"""Invariant-function checks and symbolic verification of the reduction chains.

A reduction ansatz u = shape * f(args) is pushed through the field equation
by the chain rule; the shape factors out and the remainder must depend on
(t, x, y) only through the new independent variables.  Matching against a
printed reduced equation is done up to an overall nonzero factor, determined
by dividing the coefficients of one reduced-function atom and then checking
the difference exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy as sp
from sympy.core.function import AppliedUndef

from . import kernel
from .geometry import COORDS, VectorField
from .grammar import parse
from .kernel import (
    EPS,
    ONE,
    ZERO,
    Expr,
    KernelError,
    adiff,
    diff,
    is_zero,
    substitute,
    substitute_function,
    variable,
)
from .linalg import nullspace
from .symmetry import PotentialSpec

__all__ = [
    "Ansatz",
    "ReductionError",
    "REDUCED_FUNCTIONS",
    "check_invariant",
    "reduce_residual",
    "match_up_to_factor",
]

REDUCED_FUNCTIONS = frozenset({"zeta", "phi", "beta", "rho"})


class ReductionError(KernelError):
    pass


@dataclass(frozen=True)
class Ansatz:
    """Replacement u(t,x,y) = shape * func(args)."""

    shape: Expr
    func: str
    args: tuple[Expr, ...]

    def __post_init__(self):
        if not 1 <= len(self.args) <= 2:
            raise ReductionError("reduced function must have one or two arguments")

    @classmethod
    def from_text(cls, text: str, functions=REDUCED_FUNCTIONS) -> "Ansatz":
        e = parse(text, frozenset(functions) | {"V", "W"})
        hits = [(b, mi, args) for b, mi, args in kernel.function_atoms(e)
                if b in functions]
        if len(hits) != 1:
            raise ReductionError(
                f"ansatz must contain exactly one reduced-function factor, found {len(hits)}")
        base, mi, args = hits[0]
        if any(mi):
            raise ReductionError("reduced function in an ansatz must be underived")
        node = kernel.afunc(base, list(args))
        shape = e / node
        if shape.contains(node):
            raise ReductionError("ansatz is not of the form shape * f(args)")
        return cls(shape, base, args)

    @property
    def replacement(self) -> Expr:
        return self.shape * kernel.afunc(self.func, list(self.args))


def check_invariant(X: VectorField, W: Expr) -> Expr:
    """X(W) over (t, x, y, u); zero iff W is invariant."""
    return X.apply(W)


def _annihilators(args: tuple[Expr, ...]) -> list[list[Expr]]:
    rows = [[diff(a, v) for v in COORDS] for a in args]
    return nullspace(rows)


def reduce_residual(A: Ansatz, V: PotentialSpec, equation: Expr | None = None,
                    dependent: str | None = None) -> tuple[Expr, Expr]:
    """Substitute the ansatz into the field equation (or into `equation`, an
    expression in the abstract function `dependent` of plain coordinates) and
    factor out the shape.

    Returns (shape, residual).  Raises ReductionError when the shape collapses
    to zero or the residual keeps explicit dependence outside the new
    independent variables (ansatz inconsistent with the potential).
    """
    if len(A.args) == 2:
        rows = [[diff(a, v) for v in COORDS] for a in A.args]
        minors = []
        for c1 in range(3):
            for c2 in range(c1 + 1, 3):
                minors.append(rows[0][c1] * rows[1][c2] - rows[0][c2] * rows[1][c1])
        if all(is_zero(m) for m in minors):
            raise ReductionError("ansatz arguments are functionally dependent")
    if is_zero(A.shape):
        raise ReductionError("degenerate ansatz: shape factor is zero")

    u_repl = A.replacement
    if equation is None:
        field_eq = (diff(diff(u_repl, "t"), "t") / EPS
                    + diff(diff(u_repl, "x"), "x")
                    + diff(diff(u_repl, "y"), "y")
                    + V.expr * u_repl)
    else:
        if dependent is None:
            raise ReductionError("equation substitution needs the dependent function name")
        field_eq = substitute_function(equation, dependent, u_repl)
    residual = field_eq / A.shape

    for z in _annihilators(A.args):
        zq = sum((zi * diff(residual, v) for zi, v in zip(z, COORDS)), ZERO)
        if not is_zero(zq):
            raise ReductionError(
                "residual keeps explicit coordinate dependence; "
                "ansatz is inconsistent with the potential")
    return A.shape, residual


def match_up_to_factor(computed: Expr, printed: Expr,
                       eps_signs=(1, -1)) -> Expr | None:
    """Nonzero factor mu with computed = mu * printed, or None.

    The candidate comes from dividing the coefficients of the first
    reduced-function atom the two expressions share.  Restricting eps_signs
    checks the identity at a single signature only.
    """
    atoms_c = {(b, mi, args) for b, mi, args in kernel.function_atoms(computed)
               if b in REDUCED_FUNCTIONS}
    atoms_p = {(b, mi, args) for b, mi, args in kernel.function_atoms(printed)
               if b in REDUCED_FUNCTIONS}
    shared = sorted(atoms_c & atoms_p,
                    key=lambda r: (r[0], r[1], tuple(str(a) for a in r[2])))
    for b, mi, args in shared:
        node = kernel.afunc(b, list(args), mi)
        cp = adiff(printed, node)
        if is_zero(cp, eps_signs):
            continue
        mu = adiff(computed, node) / cp
        if is_zero(mu, eps_signs):
            continue
        if is_zero(computed - mu * printed, eps_signs):
            return mu
    return None
