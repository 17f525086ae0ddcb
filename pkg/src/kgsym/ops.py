"""One-off operations behind the CLI and the HTTP service: single-vector
checks, conserved-vector derivation, and ansatz reduction."""

from __future__ import annotations

from . import kernel
from .geometry import CollineationKind, VectorField, classify_collineation
from .grammar import parse, to_string
from .kernel import U, ZERO, Expr, KernelError, adiff, is_zero
from .noether import conserved_vector, divergence_on_shell, lagrangian, solve_gauge
from .reduction import Ansatz, REDUCED_FUNCTIONS, reduce_residual
from .reports import FAIL, PASS, Report
from .symmetry import (
    PotentialSpec,
    SymmetryCandidate,
    constraint_residual,
    determine_u_coefficient,
    lie_invariance_residual,
)

__all__ = ["parse_vector", "check_vector", "derive_conserved", "reduce_ansatz"]


def parse_vector(components: str, eta: str | None = None) -> tuple[VectorField, Expr]:
    """Three comma-separated component expressions (xi^t, xi^x, xi^y) and an
    optional eta of the form c(t,x,y) * u."""
    parts = [p.strip() for p in components.split(",")]
    if len(parts) != 3:
        raise KernelError("expected three comma-separated components: xi_t, xi_x, xi_y")
    xi = [parse(p) for p in parts]
    u_coeff = ZERO
    if eta:
        eta_expr = parse(eta)
        u_coeff = adiff(eta_expr, U)
        if not is_zero(eta_expr - u_coeff * U) or "u" in kernel.free_symbols(u_coeff):
            raise KernelError("eta must be of the form c(t,x,y) * u")
    return VectorField(*xi), u_coeff


def check_vector(components: str, psi: str | None, potential: str,
                 eta: str | None = None, eps_signs=(1, -1)) -> Report:
    """Constraint plus full invariance check for one generator and potential."""
    rep = Report("check")
    X, u_coeff = parse_vector(components, eta)
    V = PotentialSpec.from_text(potential)
    cls = classify_collineation(X)
    rep.add("check.collineation", "collineation class of the vector",
            PASS if cls.kind is not CollineationKind.NONE else FAIL, note=str(cls))
    if cls.kind is CollineationKind.NONE:
        return rep
    psi_expr = parse(psi) if psi is not None else cls.psi
    if not is_zero(psi_expr - cls.psi, eps_signs):
        rep.add("check.psi", "stated conformal factor", FAIL,
                note=f"stated {psi}, computed {to_string(cls.psi)}")
        return rep
    r = constraint_residual(X, psi_expr, V)
    ok = is_zero(r, eps_signs)
    rep.add("check.constraint", "potential constraint", PASS if ok else FAIL,
            residual=None if ok else to_string(r))
    note = None
    if eta is None and cls.kind is CollineationKind.SCKV:
        u_coeff, note = determine_u_coefficient(X, cls.psi, V)
        if u_coeff is None:
            rep.add("check.invariance", "second-prolongation invariance", FAIL, note=note)
            return rep
        note = f"u-coefficient {to_string(u_coeff)} determined ({note})"
    r2 = lie_invariance_residual(SymmetryCandidate(X, u_coeff=u_coeff), V)
    ok2 = is_zero(r2, eps_signs)
    rep.add("check.invariance", "second-prolongation invariance", PASS if ok2 else FAIL,
            residual=None if ok2 else to_string(r2), note=note)
    return rep


def derive_conserved(components: str, potential: str, eta: str | None = None,
                     eps_signs=(1, -1)) -> dict:
    """Noether-derived conserved vector for a generator; raises on non-Noether."""
    X, u_coeff = parse_vector(components, eta)
    V = PotentialSpec.from_text(potential)
    cls = classify_collineation(X)
    if cls.kind is CollineationKind.NONE:
        raise KernelError("vector is not a conformal field of the metric")
    if eta is None:
        if cls.kind is CollineationKind.SCKV:
            u_coeff, _ = determine_u_coefficient(X, cls.psi, V)
            if u_coeff is None:
                raise KernelError("no u-coefficient makes this vector a symmetry")
        else:
            u_coeff = -cls.psi / 2
    S = SymmetryCandidate(X, u_coeff=u_coeff)
    L = lagrangian(V)
    gauge = solve_gauge(S, L)
    if gauge is None:
        raise KernelError("vector is not a Noether symmetry of this Lagrangian")
    T = conserved_vector(S, L, gauge)
    div = divergence_on_shell(T, V)
    return {
        "u_coeff": to_string(u_coeff),
        "gauge": [to_string(c) for c in gauge.components],
        "T": [to_string(c) for c in T.components],
        "divergence_zero": is_zero(div, eps_signs),
    }


def reduce_ansatz(ansatz: str, potential: str) -> dict:
    A = Ansatz.from_text(ansatz)
    V = PotentialSpec.from_text(potential)
    shape, residual = reduce_residual(A, V)
    return {
        "shape": to_string(shape),
        "reduced_function": A.func,
        "arguments": [to_string(a) for a in A.args],
        "residual": to_string(residual),
    }
