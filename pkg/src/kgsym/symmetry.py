"""Lie point symmetries of (1/eps) u_tt + u_xx + u_yy + V u = 0.

Two independent routes are implemented and cross-checked: the conformal
constraint condition xi^k V_,k + 2 psi V + (1/2) Lap(psi) = 0 restricted to
the catalog generators, and the full second-prolongation invariance of the
equation itself.  The u-coefficient of a special-CKV symmetry is never
hard-coded: `determine_u_coefficient` solves the determining equations for
the scalar multiple of psi that makes the prolonged generator a symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import kernel
from .geometry import (
    COORDS,
    METRIC,
    CollineationKind,
    MetricSpec,
    VectorField,
    classify_collineation,
    laplacian,
)
from .grammar import parse
from .kernel import (
    EPS,
    ONE,
    U,
    ZERO,
    Expr,
    KernelError,
    diff,
    is_zero,
    jet,
    substitute,
    total_diff,
    variable,
)

__all__ = [
    "PotentialSpec",
    "SymmetryCandidate",
    "ProlongedField",
    "pde_expr",
    "on_shell_eliminate",
    "prolong",
    "constraint_residual",
    "lie_invariance_residual",
    "determine_u_coefficient",
    "POTENTIAL_FUNCTIONS",
]

POTENTIAL_FUNCTIONS = frozenset({"V", "W"})

_JET_TT = jet("tt")


@dataclass(frozen=True)
class PotentialSpec:
    """Potential V(t,x,y): jet-free and u-free, usually built from an abstract
    function with expression arguments (e.g. (1/t^2)*V(x/t, y/t))."""

    expr: Expr

    def __post_init__(self):
        bad = {"u"} | {jv.name for jv in kernel.jet_atoms(self.expr)}
        if bad & kernel.free_symbols(self.expr):
            raise KernelError("potential must not involve u or jet coordinates")

    @classmethod
    def from_text(cls, text: str) -> "PotentialSpec":
        return cls(parse(text, POTENTIAL_FUNCTIONS))

    def grad(self) -> tuple[Expr, Expr, Expr]:
        return tuple(diff(self.expr, v) for v in COORDS)


@dataclass(frozen=True)
class SymmetryCandidate:
    """xi + (c(t,x,y) + a0) u d_u (+ b(t,x,y) d_u when a solution term is attached)."""

    base: VectorField
    u_coeff: Expr = ZERO
    a0: Expr = ZERO
    solution_term: str | None = None

    def __post_init__(self):
        if self.base.eta != ZERO:
            raise KernelError("put the u-coefficient in u_coeff, not in base.eta")
        if "u" in kernel.free_symbols(self.u_coeff):
            raise KernelError("u_coeff must not depend on u")

    @property
    def eta(self) -> Expr:
        e = (self.u_coeff + self.a0) * U
        if self.solution_term:
            e = e + kernel.afunc(self.solution_term, [variable(v) for v in COORDS])
        return e

    def field(self) -> VectorField:
        return VectorField(self.base.xi_t, self.base.xi_x, self.base.xi_y, self.eta)


@dataclass(frozen=True)
class ProlongedField:
    first: dict[str, Expr]
    second: dict[tuple[str, str], Expr]

    def second_at(self, i: str, j: str) -> Expr:
        return self.second[tuple(sorted((i, j)))]


def prolong(S: SymmetryCandidate) -> ProlongedField:
    """First and second prolongation coefficients
    eta^i = D_i(eta) - u_j D_i(xi^j),  eta^{ij} = D_j(eta^i) - u_{ik} D_j(xi^k)."""
    xi = dict(zip(COORDS, S.base.xi))
    eta = S.eta
    first: dict[str, Expr] = {}
    for i in COORDS:
        e = total_diff(eta, i)
        for j in COORDS:
            e = e - jet(j) * diff(xi[j], i)
        first[i] = e
    second: dict[tuple[str, str], Expr] = {}
    for i in COORDS:
        for j in COORDS:
            if (i, j) != tuple(sorted((i, j))):
                continue
            e = total_diff(first[i], j)
            for k in COORDS:
                e = e - jet(sorted((i, k))) * diff(xi[k], j)
            second[(i, j)] = e
    return ProlongedField(first, second)


def pde_expr(V: PotentialSpec) -> Expr:
    """Left side of the field equation: (1/eps) u_tt + u_xx + u_yy + V u."""
    return jet("tt") / EPS + jet("xx") + jet("yy") + V.expr * U


def _tt_rules(V: PotentialSpec, needed: list[kernel.JetVar]) -> dict[Expr, Expr]:
    base = -EPS * (jet("xx") + jet("yy") + V.expr * U)
    rules: dict[Expr, Expr] = {}
    for jv in needed:
        rest = list(jv.index)
        rest.remove("t")
        rest.remove("t")
        e = base
        for v in rest:
            e = total_diff(e, v)
        rules[jet(jv.index)] = e
    return rules


def on_shell_eliminate(e: Expr, V: PotentialSpec, solution_term: str | None = None) -> Expr:
    """Eliminate every jet carrying >= 2 t-indices via u_tt = -eps(u_xx + u_yy + V u)
    and its total derivatives; with a solution term attached, eliminate the
    matching second t-derivatives of the abstract solution the same way."""
    while True:
        needed = [jv for jv in kernel.jet_atoms(e) if jv.index.count("t") >= 2]
        if not needed:
            break
        needed.sort(key=lambda jv: -jv.order)
        e = substitute(e, _tt_rules(V, needed))
    if solution_term:
        e = _eliminate_solution_tt(e, V, solution_term)
    return e


def _eliminate_solution_tt(e: Expr, V: PotentialSpec, name: str) -> Expr:
    coords = [variable(v) for v in COORDS]
    b = lambda mi: kernel.afunc(name, coords, mi)
    while True:
        hits = [mi for base, mi, args in kernel.function_atoms(e)
                if base == name and mi[0] >= 2]
        if not hits:
            return e
        hits.sort(key=lambda mi: -sum(mi))
        mi = hits[0]
        rule = -EPS * (b((0, 2, 0)) + b((0, 0, 2)) + V.expr * b((0, 0, 0)))
        for v, times in zip(COORDS, (mi[0] - 2, mi[1], mi[2])):
            for _ in range(times):
                rule = diff(rule, v)
        e = Expr(e._s.xreplace({b(mi)._s: rule._s}))


def constraint_residual(X: VectorField, psi: Expr, V: PotentialSpec,
                        g: MetricSpec = METRIC) -> Expr:
    """xi^k V_,k + 2 psi V + (1/2) Lap(psi); the caller tests is_zero."""
    cls = classify_collineation(X, g)
    if cls.kind is CollineationKind.NONE or not is_zero(cls.psi - psi):
        raise KernelError(f"psi = {psi} is not the verified conformal factor of {X}")
    r = 2 * psi * V.expr + laplacian(psi, g) / 2
    for xi, dv in zip(X.xi, V.grad()):
        r = r + xi * dv
    return r


def lie_invariance_residual(S: SymmetryCandidate, V: PotentialSpec) -> Expr:
    """Second-prolonged action of S on the field equation, reduced on-shell."""
    pro = prolong(S)
    r = S.eta * V.expr \
        + pro.second_at("t", "t") / EPS + pro.second_at("x", "x") + pro.second_at("y", "y")
    for xi, dv in zip(S.base.xi, V.grad()):
        r = r + xi * dv * U
    return on_shell_eliminate(r, V, S.solution_term)


def determine_u_coefficient(X: VectorField, psi: Expr, V: PotentialSpec
                            ) -> tuple[Expr | None, str]:
    """Solve the determining equations for the scalar lam with
    S = X + lam*psi*u d_u a Lie symmetry; returns (lam*psi, note).

    For constant psi the coefficient is unidentifiable (absorbed into the a0 u
    d_u freedom); the result is then 0 with an explanatory note.
    """
    if all(is_zero(diff(psi, v)) for v in COORDS):
        return ZERO, "constant psi: u-term absorbed into a0"
    lam = variable("_lam")
    S = SymmetryCandidate(X, u_coeff=lam * psi)
    r = lie_invariance_residual(S, V)
    a = substitute(r, {lam: ZERO})
    b = substitute(r, {lam: ONE}) - a
    if not is_zero(r - (a + lam * b)):
        raise KernelError("residual unexpectedly nonlinear in lam")
    if is_zero(b):
        if is_zero(a):
            return ZERO, "degenerate: every lam works"
        return None, "no u-coefficient makes X a symmetry"
    q = -a / b
    if not q.is_rational_constant:
        return None, "determining equations force a non-constant coefficient"
    if not is_zero(a + q * b):
        return None, "no single lam satisfies all determining equations"
    value = kernel.rational_value(q)
    return q * psi, f"lam = {value}"
