"""Flat 3-metric with signature eps, collineation classification, Lie brackets,
and the built-in ten-generator conformal catalog with its bracket table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import sympy as sp

from . import kernel
from .grammar import parse
from .kernel import EPS, ONE, ZERO, Expr, KernelError, diff, is_zero
from .linalg import solve_linear

__all__ = [
    "MetricSpec",
    "VectorField",
    "CollineationClass",
    "CollineationKind",
    "AlgebraEntry",
    "METRIC",
    "COORDS",
    "lie_derivative_metric",
    "classify_collineation",
    "laplacian",
    "lie_bracket",
    "catalog",
    "catalog_fields",
    "bracket_table",
    "subalgebra_entries",
    "parse_generator_combo",
    "combo_field",
    "span_contains",
]

COORDS = ("t", "x", "y")


@dataclass(frozen=True)
class MetricSpec:
    """Diagonal flat metric ds^2 = eps dt^2 + dx^2 + dy^2."""

    diag: tuple[Expr, Expr, Expr] = (EPS, ONE, ONE)

    @property
    def inverse_diag(self) -> tuple[Expr, Expr, Expr]:
        return tuple(ONE / d for d in self.diag)


METRIC = MetricSpec()


@dataclass(frozen=True)
class VectorField:
    """Point generator xi^t d_t + xi^x d_x + xi^y d_y + eta d_u."""

    xi_t: Expr
    xi_x: Expr
    xi_y: Expr
    eta: Expr = ZERO

    @property
    def xi(self) -> tuple[Expr, Expr, Expr]:
        return (self.xi_t, self.xi_x, self.xi_y)

    def apply(self, f: Expr) -> Expr:
        """First-order action on a scalar of (t, x, y, u)."""
        out = self.eta * diff(f, "u") if self.eta != ZERO else ZERO
        for xi, v in zip(self.xi, COORDS):
            if xi != ZERO:
                out = out + xi * diff(f, v)
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.xi_t + other.xi_t, self.xi_x + other.xi_x,
                           self.xi_y + other.xi_y, self.eta + other.eta)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scaled(kernel.integer(-1))

    def scaled(self, c: Expr) -> "VectorField":
        return VectorField(c * self.xi_t, c * self.xi_x, c * self.xi_y, c * self.eta)

    def is_zero_field(self) -> bool:
        return all(is_zero(c) for c in (*self.xi, self.eta))

    def __str__(self) -> str:
        return f"[{self.xi_t}, {self.xi_x}, {self.xi_y}; eta={self.eta}]"


ZERO_FIELD = VectorField(ZERO, ZERO, ZERO, ZERO)


class CollineationKind(str, Enum):
    KV = "KV"
    HV = "HV"
    SCKV = "sCKV"
    PROPER_CKV = "properCKV"
    NONE = "none"


@dataclass(frozen=True)
class CollineationClass:
    kind: CollineationKind
    psi: Expr | None

    def __str__(self) -> str:
        if self.psi is None:
            return self.kind.value
        return f"{self.kind.value} (psi = {self.psi})"


@dataclass(frozen=True)
class AlgebraEntry:
    """A named generator set (Table-1 style subalgebra)."""

    name: str
    indices: tuple[int, ...]
    as_printed: str | None = None

    def __post_init__(self):
        if not self.indices:
            raise KernelError("empty subalgebra entry")
        if any(not 1 <= k <= 10 for k in self.indices):
            raise KernelError(f"{self.name}: generator index out of range 1..10")


# ---------------------------------------------------------------------------
# metric operations


def lie_derivative_metric(X: VectorField, g: MetricSpec = METRIC) -> list[list[Expr]]:
    """(L_X g)_ab for the constant diagonal metric."""
    for c in X.xi:
        if "u" in kernel.free_symbols(c):
            raise KernelError("xi components must not depend on u")
    out = [[ZERO] * 3 for _ in range(3)]
    for a, va in enumerate(COORDS):
        for b, vb in enumerate(COORDS):
            out[a][b] = g.diag[b] * diff(X.xi[b], va) + g.diag[a] * diff(X.xi[a], vb)
    return out


def classify_collineation(X: VectorField, g: MetricSpec = METRIC) -> CollineationClass:
    """Extract the conformal factor from the metric trace, verify L_X g = 2 psi g,
    then classify by the derivative structure of psi."""
    L = lie_derivative_metric(X, g)
    ginv = g.inverse_diag
    psi = sum((ginv[a] * L[a][a] for a in range(3)), ZERO) / kernel.integer(6)
    for a in range(3):
        for b in range(3):
            want = 2 * psi * g.diag[a] if a == b else ZERO
            if not is_zero(L[a][b] - want):
                return CollineationClass(CollineationKind.NONE, None)
    if is_zero(psi):
        return CollineationClass(CollineationKind.KV, psi)
    grad = [diff(psi, v) for v in COORDS]
    if all(is_zero(d) for d in grad):
        return CollineationClass(CollineationKind.HV, psi)
    hess = [diff(d, v) for d in grad for v in COORDS]
    if all(is_zero(h) for h in hess):
        return CollineationClass(CollineationKind.SCKV, psi)
    return CollineationClass(CollineationKind.PROPER_CKV, psi)


def laplacian(f: Expr, g: MetricSpec = METRIC) -> Expr:
    out = ZERO
    for d, v in zip(g.inverse_diag, COORDS):
        out = out + d * diff(diff(f, v), v)
    return out


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y] componentwise over (t, x, y, u)."""
    return VectorField(
        X.apply(Y.xi_t) - Y.apply(X.xi_t),
        X.apply(Y.xi_x) - Y.apply(X.xi_x),
        X.apply(Y.xi_y) - Y.apply(X.xi_y),
        X.apply(Y.eta) - Y.apply(X.eta),
    )


# ---------------------------------------------------------------------------
# generator-combination strings ("a*X1 + b*X2", "(1/eps)*X6")

_MARKERS = tuple(f"X{k}" for k in range(1, 11))


def parse_generator_combo(text: str) -> list[tuple[Expr, int]]:
    """Parse a linear combination of catalog generators into (coefficient, index)
    pairs.  Coefficients may involve eps and free constants."""
    e = parse(text)
    combo: list[tuple[Expr, int]] = []
    residue = e
    for k, marker in enumerate(_MARKERS, start=1):
        mvar = kernel.variable(marker)
        c = kernel.adiff(e, mvar)
        if c == ZERO:
            continue
        if any(m in kernel.free_symbols(c) for m in _MARKERS):
            raise KernelError(f"generator combination not linear: {text!r}")
        combo.append((c, k))
        residue = residue - c * mvar
    if residue != ZERO:
        raise KernelError(f"not a combination of X1..X10: {text!r}")
    if not combo:
        raise KernelError(f"empty generator combination: {text!r}")
    return combo


def combo_field(combo: Iterable[tuple[Expr, int]], fields: Sequence[VectorField] | None = None) -> VectorField:
    fields = catalog_fields() if fields is None else fields
    out = ZERO_FIELD
    for c, k in combo:
        out = out + fields[k - 1].scaled(c)
    return out


# ---------------------------------------------------------------------------
# packaged catalog and tables

from .data import load_catalog, load_brackets, load_subalgebras  # noqa: E402

_catalog_cache: list[tuple[VectorField, CollineationClass]] | None = None


def catalog(data_dir=None) -> list[tuple[VectorField, CollineationClass]]:
    """The ten conformal generators with their verified collineation classes.

    Loaded from the packaged data file and re-verified by
    classify_collineation; a mismatch is a construction error.
    """
    global _catalog_cache
    if _catalog_cache is not None and data_dir is None:
        return _catalog_cache
    rows = load_catalog(data_dir)
    out = []
    for row in rows:
        X = VectorField(row.xi_t, row.xi_x, row.xi_y)
        got = classify_collineation(X)
        if got.kind.value != row.kind or not is_zero(got.psi - row.psi):
            raise KernelError(
                f"catalog entry X{row.index} failed self-verification: "
                f"stated {row.kind}/psi={row.psi}, computed {got}")
        out.append((X, got))
    if data_dir is None:
        _catalog_cache = out
    return out


def catalog_fields(data_dir=None) -> list[VectorField]:
    return [X for X, _ in catalog(data_dir)]


def bracket_table(data_dir=None):
    return load_brackets(data_dir)


def subalgebra_entries(data_dir=None) -> list[AlgebraEntry]:
    return [AlgebraEntry(name, idx, note) for name, idx, note in load_subalgebras(data_dir)]


# ---------------------------------------------------------------------------
# span membership (exact, per signature instantiation)


def _poly_coeff_rows(comps: list[Expr], sign: int) -> dict:
    """Monomial-coefficient map of eps-instantiated polynomial components."""
    out: dict[tuple[int, tuple[int, ...]], Expr] = {}
    syms = [sp.Symbol(v) for v in COORDS]
    for ci, comp in enumerate(comps):
        inst = Expr(comp._s.xreplace({sp.Symbol("eps"): sp.Integer(sign)}))
        s = inst._s
        num, den = sp.fraction(sp.cancel(s))
        if not den.is_Rational:
            raise KernelError("span membership expects polynomial components")
        poly = sp.Poly(num / den, *syms)
        for monom, coeff in poly.terms():
            out[(ci, monom)] = Expr(sp.sympify(coeff))
    return out


def span_contains(basis: Sequence[VectorField], target: VectorField) -> list[Expr] | None:
    """Exact span membership for the xi-components, checked at eps = +1 and -1;
    returns combination coefficients (from the eps = +1 solve) or None."""
    sols = []
    for sign in (1, -1):
        rows_keys = set()
        basis_maps = []
        for B in basis:
            m = _poly_coeff_rows(list(B.xi), sign)
            basis_maps.append(m)
            rows_keys.update(m)
        tgt = _poly_coeff_rows(list(target.xi), sign)
        rows_keys.update(tgt)
        keys = sorted(rows_keys, key=lambda k: (k[0], k[1]))
        mat = [[bm.get(key, ZERO) for bm in basis_maps] for key in keys]
        rhs = [tgt.get(key, ZERO) for key in keys]
        sol = solve_linear(mat, rhs)
        if sol is None:
            return None
        sols.append(sol)
    return sols[0]
