"""Noether condition, gauge solving, and conserved-vector verification.

The Lagrangian is quadratic in u and its first jets, so the Noether residual
X^(1)(L) + L D_i xi^i - D_i f_i is at most quadratic in (u, u_t, u_x, u_y)
and the gauge ansatz f_i = a_i u^2 + b_i u + c_i can be solved by direct
coefficient surgery: the u*u_i coefficients force a_i, the u_i coefficients
force b_i, and the remaining identities are consistency checks.  No equation
of this family needs a nonzero c_i (the residual has no jet-free part), but
the checks would catch one.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernel
from .geometry import COORDS, METRIC, MetricSpec, VectorField
from .kernel import (
    EPS,
    U,
    ZERO,
    Expr,
    KernelError,
    adiff,
    diff,
    is_zero,
    jet,
    substitute,
    total_diff,
)
from .symmetry import PotentialSpec, SymmetryCandidate, on_shell_eliminate, prolong

__all__ = [
    "Lagrangian",
    "GaugeTriple",
    "ConservedVector",
    "lagrangian",
    "euler_lagrange",
    "noether_residual",
    "solve_gauge",
    "conserved_vector",
    "divergence_on_shell",
    "ZERO_GAUGE",
]

_FIRST_JETS = tuple(jet(v) for v in COORDS)


@dataclass(frozen=True)
class Lagrangian:
    """First-order Lagrangian density; delta L / delta u reproduces the field
    equation up to the stated sign convention."""

    expr: Expr
    potential: PotentialSpec

    def __post_init__(self):
        if any(jv.order > 1 for jv in kernel.jet_atoms(self.expr)):
            raise KernelError("Lagrangian must be first order in jets")


@dataclass(frozen=True)
class GaugeTriple:
    """Point-dependent gauge functions (f_t, f_x, f_y), quadratic in u."""

    f_t: Expr = ZERO
    f_x: Expr = ZERO
    f_y: Expr = ZERO

    def __post_init__(self):
        for f in self.components:
            if kernel.jet_atoms(f) not in ([], [kernel.JetVar(())]):
                raise KernelError("gauge terms must not contain jet coordinates")
            if adiff(adiff(adiff(f, U), U), U) != ZERO:
                raise KernelError("gauge terms must be quadratic in u")

    @property
    def components(self) -> tuple[Expr, Expr, Expr]:
        return (self.f_t, self.f_x, self.f_y)

    def divergence(self) -> Expr:
        return sum((total_diff(f, v) for f, v in zip(self.components, COORDS)), ZERO)

    def is_zero_gauge(self) -> bool:
        return all(is_zero(f) for f in self.components)


ZERO_GAUGE = GaugeTriple()


@dataclass(frozen=True)
class ConservedVector:
    T_t: Expr
    T_x: Expr
    T_y: Expr

    @property
    def components(self) -> tuple[Expr, Expr, Expr]:
        return (self.T_t, self.T_x, self.T_y)

    def __sub__(self, other: "ConservedVector") -> "ConservedVector":
        return ConservedVector(*[a - b for a, b in zip(self.components, other.components)])


def lagrangian(V: PotentialSpec) -> Lagrangian:
    expr = (V.expr * U ** 2 - jet("x") ** 2 - jet("y") ** 2 - jet("t") ** 2 / EPS) / 2
    return Lagrangian(expr, V)


def euler_lagrange(L: Lagrangian) -> Expr:
    """dL/du - D_i(dL/du_i), normalized."""
    out = adiff(L.expr, U)
    for v in COORDS:
        out = out - total_diff(adiff(L.expr, jet(v)), v)
    return out


def _first_prolonged_action(S: SymmetryCandidate, L: Lagrangian) -> Expr:
    pro = prolong(S)
    out = S.eta * adiff(L.expr, U)
    for v in COORDS:
        out = out + pro.first[v] * adiff(L.expr, jet(v))
    for xi, v in zip(S.base.xi, COORDS):
        out = out + xi * kernel.ediff(L.expr, v)
    return out


def noether_residual(S: SymmetryCandidate, L: Lagrangian,
                     f: GaugeTriple = ZERO_GAUGE) -> Expr:
    """X^(1)(L) + L * D_i xi^i - D_i f_i."""
    div_xi = sum((diff(xi, v) for xi, v in zip(S.base.xi, COORDS)), ZERO)
    return _first_prolonged_action(S, L) + L.expr * div_xi - f.divergence()


def _quadratic_parts(R: Expr):
    """Split a residual quadratic in (u, u_t, u_x, u_y) into coefficient maps."""
    at_zero = {U: ZERO, **{j: ZERO for j in _FIRST_JETS}}
    const = substitute(R, at_zero)
    lin_u = substitute(adiff(R, U), at_zero)
    lin_jet = {v: substitute(adiff(R, jet(v)), at_zero) for v in COORDS}
    quad_uu = adiff(adiff(R, U), U) / 2
    quad_u_jet = {v: adiff(adiff(R, U), jet(v)) for v in COORDS}
    quad_jets = {}
    for i, vi in enumerate(COORDS):
        for vj in COORDS[i:]:
            c = adiff(adiff(R, jet(vi)), jet(vj))
            quad_jets[(vi, vj)] = c if vi != vj else c / 2
    # reconstruction check guards against unexpectedly high degree
    rebuilt = const + lin_u * U + quad_uu * U ** 2
    for v in COORDS:
        rebuilt = rebuilt + lin_jet[v] * jet(v) + quad_u_jet[v] * U * jet(v)
    for (vi, vj), c in quad_jets.items():
        rebuilt = rebuilt + c * jet(vi) * jet(vj)
    if not is_zero(R - rebuilt):
        raise KernelError("residual is not quadratic in u and its first jets")
    return const, lin_u, lin_jet, quad_uu, quad_u_jet, quad_jets


def _is_polynomial_coefficient(e: Expr, max_degree: int, allow_funcs: set[str]) -> bool:
    import sympy as sp
    from sympy.core.function import AppliedUndef
    bad = {b for b, _, _ in kernel.function_atoms(e) if b not in allow_funcs}
    if bad:
        return False
    s = e._s
    # opaque stand-ins for permitted function atoms (e.g. an attached solution term)
    s = s.xreplace({f: sp.Dummy() for f in s.atoms(AppliedUndef)})
    num, den = sp.fraction(s)
    syms = [sp.Symbol(v) for v in COORDS]
    if any(den.has(sym) for sym in syms):
        return False
    try:
        poly = sp.Poly(num, *syms)
    except sp.PolynomialError:
        return False
    return poly.total_degree() <= max_degree


def solve_gauge(S: SymmetryCandidate, L: Lagrangian, max_degree: int = 4
                ) -> GaugeTriple | None:
    """Gauge triple making S a Noether symmetry of L, or None.

    The residual forces a_i = coeff(u u_i)/2 and b_i = coeff(u_i); what
    remains are identities (checked exactly, on shell when a solution term is
    attached).  Candidates outside the polynomial ansatz of degree
    `max_degree`, or involving the abstract potential, are rejected.
    """
    R = noether_residual(S, L)
    if is_zero(R):
        return ZERO_GAUGE
    const, lin_u, lin_jet, quad_uu, quad_u_jet, quad_jets = _quadratic_parts(R)
    if any(not is_zero(c) for c in quad_jets.values()):
        return None
    if not is_zero(const):
        return None
    allow = {S.solution_term} if S.solution_term else set()
    a = {v: quad_u_jet[v] / 2 for v in COORDS}
    b = dict(lin_jet)
    for g in (*a.values(), *b.values()):
        if not _is_polynomial_coefficient(g, max_degree, allow):
            return None

    def onshell(e: Expr) -> Expr:
        return on_shell_eliminate(e, L.potential, S.solution_term)

    div_a = sum((diff(a[v], v) for v in COORDS), ZERO)
    if not is_zero(onshell(quad_uu - div_a)):
        return None
    div_b = sum((diff(b[v], v) for v in COORDS), ZERO)
    if not is_zero(onshell(lin_u - div_b)):
        return None
    f = GaugeTriple(*[a[v] * U ** 2 + b[v] * U for v in COORDS])
    if not is_zero(onshell(noether_residual(S, L, f))):
        raise KernelError("gauge candidate failed final verification")
    return f


def conserved_vector(S: SymmetryCandidate, L: Lagrangian,
                     f: GaugeTriple = ZERO_GAUGE) -> ConservedVector:
    """T^i = f^i - [xi^i L + W dL/du_i] with W = eta - xi^j u_j (first-order
    truncation of the Noether operator)."""
    if not is_zero(on_shell_eliminate(noether_residual(S, L, f), L.potential, S.solution_term)):
        raise KernelError("S is not a Noether symmetry of L with this gauge")
    W = S.eta
    for xi, v in zip(S.base.xi, COORDS):
        W = W - xi * jet(v)
    comps = []
    for fi, xi, v in zip(f.components, S.base.xi, COORDS):
        comps.append(fi - xi * L.expr - W * adiff(L.expr, jet(v)))
    return ConservedVector(*comps)


def divergence_on_shell(T: ConservedVector, V: PotentialSpec,
                        solution_term: str | None = None) -> Expr:
    """D_t T^t + D_x T^x + D_y T^y with u_tt (and its total derivatives)
    eliminated through the field equation."""
    d = sum((total_diff(c, v) for c, v in zip(T.components, COORDS)), ZERO)
    return on_shell_eliminate(d, V, solution_term)
