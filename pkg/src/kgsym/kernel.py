"""Exact symbolic expressions over coordinates, jets and abstract functions.

The expression domain is deliberately small: rational constants, the
coordinates t, x, y, the signature symbol eps, free constants, jet
coordinates of the dependent variable u up to order 3, abstract functions
applied to expression arguments (with a per-slot derivative multi-index),
and the elementary functions exp, arctan, sqrt.  Every public operation
returns a *normalized* expression: a single quotient of two expanded
polynomials over Q in the atoms, gcd-cancelled, with a deterministic sign
convention.  Normalization is canonical, so structural equality of
normalized trees decides equality in the rational fragment; `is_zero`
additionally quotients by the two signature instantiations eps = +1, -1.

sympy supplies the exact rational-polynomial arithmetic underneath; the
expression grammar, jet bookkeeping, derivative rules and substitution
semantics are defined here and do not rely on sympy's own calculus.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import sympy as sp
from sympy.core.function import AppliedUndef

__all__ = [
    "Expr",
    "JetVar",
    "KernelError",
    "JetOrderError",
    "ZeroDivisionExprError",
    "T",
    "X",
    "Y",
    "EPS",
    "U",
    "ZERO",
    "ONE",
    "integer",
    "rational",
    "variable",
    "jet",
    "afunc",
    "exp_",
    "arctan_",
    "sqrt_",
    "diff",
    "total_diff",
    "adiff",
    "substitute",
    "ediff",
    "substitute_function",
    "is_zero",
    "rational_value",
    "free_symbols",
    "jet_atoms",
    "function_atoms",
    "MAX_JET_ORDER",
]

MAX_JET_ORDER = 3

_COORD_NAMES = ("t", "x", "y")
_EPS = sp.Symbol("eps")
_COORD_SYMS = tuple(sp.Symbol(n) for n in _COORD_NAMES)
_ELEMENTARY = ("exp", "arctan", "sqrt")
_SQRT = sp.Function("sqrt")

_JET_RE = re.compile(r"^u(?:_([txy]{1,3}))?$")
_FUNC_RE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\[([0-9,]+)\])?$")


class KernelError(ValueError):
    """Base error for kernel misuse."""


class JetOrderError(KernelError):
    """A derivative would exceed the supported jet order."""


class ZeroDivisionExprError(KernelError):
    """Division by an expression that normalizes to zero."""


@dataclass(frozen=True, order=True)
class JetVar:
    """Jet coordinate of the dependent variable: a sorted multi-index over t, x, y."""

    index: tuple[str, ...]

    def __post_init__(self):
        if tuple(sorted(self.index)) != self.index:
            object.__setattr__(self, "index", tuple(sorted(self.index)))
        if len(self.index) > MAX_JET_ORDER:
            raise JetOrderError(f"jet order {len(self.index)} exceeds cap {MAX_JET_ORDER}")
        for c in self.index:
            if c not in _COORD_NAMES:
                raise KernelError(f"bad jet index letter {c!r}")

    @property
    def order(self) -> int:
        return len(self.index)

    @property
    def name(self) -> str:
        return "u" if not self.index else "u_" + "".join(self.index)

    @property
    def symbol(self) -> sp.Symbol:
        return sp.Symbol(self.name)

    def raised(self, coord: str) -> "JetVar":
        return JetVar(tuple(sorted(self.index + (coord,))))

    def __str__(self) -> str:
        return self.name


def _jetvar_of(sym: sp.Symbol) -> JetVar | None:
    m = _JET_RE.match(sym.name)
    if m is None:
        return None
    return JetVar(tuple(m.group(1) or ""))


def _fname(base: str, mi: tuple[int, ...]) -> str:
    if any(mi):
        return f"{base}[{','.join(str(k) for k in mi)}]"
    return base


def _fparts(func: AppliedUndef) -> tuple[str, tuple[int, ...]]:
    name = func.func.__name__
    m = _FUNC_RE.match(name)
    if m is None:
        raise KernelError(f"malformed function name {name!r}")
    base = m.group(1)
    if m.group(2):
        mi = tuple(int(k) for k in m.group(2).split(","))
    else:
        mi = (0,) * len(func.args)
    if len(mi) != len(func.args):
        raise KernelError(f"{name}: multi-index arity {len(mi)} != argument count {len(func.args)}")
    return base, mi


def _rebuild(s: sp.Expr) -> sp.Expr:
    """Re-normalize the arguments of every opaque node, bottom-up.  sqrt atoms
    are re-canonicalized entirely (their radicand may collapse, e.g. after a
    signature instantiation)."""
    if isinstance(s, AppliedUndef):
        if s.func == _SQRT:
            return _sqrt_canonical(s.args[0])
        return s.func(*[_norm(a) for a in s.args])
    if s.args:
        return s.func(*[_rebuild(a) for a in s.args])
    return s


def _sqrt_atoms(s: sp.Expr) -> list[sp.Expr]:
    return [f for f in s.atoms(AppliedUndef) if f.func == _SQRT]


def _reduce_sqrt_powers(s: sp.Expr) -> sp.Expr:
    """Rewrite sqrt(g)**n -> g**(n//2) * sqrt(g)**(n%2); negative n rationalize
    through 1/sqrt(g) = sqrt(g)/g."""
    def walk(node: sp.Expr) -> sp.Expr:
        if node.is_Pow:
            b, e = node.as_base_exp()
            if isinstance(b, AppliedUndef) and b.func == _SQRT and e.is_Integer:
                n = int(e)
                if n < 0 or n >= 2:
                    q, r = divmod(n, 2)
                    return walk(b.args[0]) ** q * b ** r
        if node.args:
            return node.func(*[walk(a) for a in node.args])
        return node

    return walk(s)


def _rationalize_sqrt_den(s: sp.Expr) -> sp.Expr:
    """Clear sqrt atoms out of the denominator (den is at most linear in each
    sqrt atom after power reduction)."""
    num, den = sp.fraction(s)
    for atom in _sqrt_atoms(den):
        try:
            p = sp.Poly(den, atom)
        except sp.PolynomialError:
            continue
        if p.degree() != 1:
            continue
        b_coeff = p.nth(1)
        a_coeff = p.nth(0)
        rad = atom.args[0]
        if a_coeff == 0:
            num = sp.expand(num * atom)
            den = sp.expand(b_coeff * rad)
        else:
            conj = a_coeff - b_coeff * atom
            num = sp.expand(num * conj)
            den = sp.expand(a_coeff ** 2 - b_coeff ** 2 * rad)
        num = _reduce_sqrt_powers(num)
        den = _reduce_sqrt_powers(den)
    return num / den


_norm_cache: dict[sp.Expr, sp.Expr] = {}


def _norm(s: sp.Expr) -> sp.Expr:
    hit = _norm_cache.get(s)
    if hit is not None:
        return hit
    out = sp.cancel(_rebuild(sp.expand(s)))
    while out.has(_SQRT):
        reduced = sp.cancel(_reduce_sqrt_powers(out))
        reduced = sp.cancel(_rationalize_sqrt_den(reduced))
        if reduced == out:
            break
        out = reduced
    _norm_cache[out] = out
    _norm_cache[s] = out
    return out


class Expr:
    """Immutable normalized expression.

    Construct through the module-level factories or arithmetic operators;
    two expressions equal as rational functions compare equal with `==`.
    """

    __slotsots__ = ()
    __slots__ = ("_s",)

    def __init__(self, s: sp.Expr, _normalized: bool = False):
        if not _normalized:
            s = _norm(sp.sympify(s, rational=True))
        object.__setattr__(self, "_s", s)

    def __setattr__(self, *_a):
        raise AttributeError("Expr is immutable")

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        return Expr(self._s + _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return Expr(-self._s)

    def __sub__(self, other):
        return Expr(self._s - _coerce(other))

    def __rsub__(self, other):
        return Expr(_coerce(other) - self._s)

    def __mul__(self, other):
        return Expr(self._s * _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = _coerce(other)
        if _norm(d) == 0:
            raise ZeroDivisionExprError("division by an expression that normalizes to 0")
        return Expr(self._s / d)

    def __rtruediv__(self, other):
        if self._s == 0:
            raise ZeroDivisionExprError("division by an expression that normalizes to 0")
        return Expr(_coerce(other) / self._s)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise KernelError("only integer exponents are supported")
        if k < 0 and self._s == 0:
            raise ZeroDivisionExprError("division by an expression that normalizes to 0")
        return Expr(self._s ** k)

    # -- identity -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Expr):
            return self._s == other._s
        if isinstance(other, (int, Fraction)):
            return self._s == _coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(self._s)

    def __repr__(self):
        from . import grammar

        return grammar.to_string(self)

    __str__ = __repr__

    # -- structure ----------------------------------------------------
    @property
    def is_rational_constant(self) -> bool:
        return self._s.is_Rational

    def contains(self, atom: "Expr") -> bool:
        return self._s.has(atom._s)


def _coerce(v) -> sp.Expr:
    if isinstance(v, Expr):
        return v._s
    if isinstance(v, int):
        return sp.Integer(v)
    if isinstance(v, Fraction):
        return sp.Rational(v.numerator, v.denominator)
    raise KernelError(f"cannot coerce {v!r} into an expression")


# ---------------------------------------------------------------------------
# factories

ZERO = Expr(sp.Integer(0), _normalized=True)
ONE = Expr(sp.Integer(1), _normalized=True)


def integer(n: int) -> Expr:
    return Expr(sp.Integer(n), _normalized=True)


def rational(p: int, q: int = 1) -> Expr:
    if q == 0:
        raise ZeroDivisionExprError("rational with zero denominator")
    return Expr(sp.Rational(p, q), _normalized=True)


def variable(name: str) -> Expr:
    """Free symbol.  `u` and jet-style names route to jet coordinates."""
    m = _JET_RE.match(name)
    if m is not None:
        return jet(m.group(1) or "")
    if name.startswith("u_"):
        raise KernelError(f"bad jet name {name!r}: suffix must be 1-3 letters from t, x, y")
    return Expr(sp.Symbol(name), _normalized=True)


def jet(index: str | Sequence[str]) -> Expr:
    jv = JetVar(tuple(index))
    return Expr(jv.symbol, _normalized=True)


T = variable("t")
X = variable("x")
Y = variable("y")
EPS = Expr(_EPS, _normalized=True)
U = jet("")


def afunc(base: str, args: Sequence[Expr], mi: Sequence[int] | None = None) -> Expr:
    """Abstract function application `base[mi](args)`; mi defaults to all zeros."""
    args = list(args)
    if mi is None:
        mi = (0,) * len(args)
    mi = tuple(int(k) for k in mi)
    if len(mi) != len(args):
        raise KernelError("multi-index arity must match argument count")
    if any(k < 0 for k in mi):
        raise KernelError("negative derivative multi-index")
    f = sp.Function(_fname(base, mi))(*[a._s for a in args])
    return Expr(f)


def exp_(e: Expr) -> Expr:
    return Expr(sp.Function("exp")(e._s))


def arctan_(e: Expr) -> Expr:
    return Expr(sp.Function("arctan")(e._s))


def _sqrt_rational_parts(q: sp.Rational) -> tuple[sp.Rational, sp.Rational]:
    """q = ext**2 * rad with rad a squarefree integer (sign kept in rad)."""
    if q == 0:
        return sp.Integer(0), sp.Integer(1)
    sign = 1 if q > 0 else -1
    ext_n, rad_n = sp.Integer(1), sp.Integer(1)
    for prime, k in sp.factorint(abs(q.p)).items():
        ext_n *= sp.Integer(prime) ** (k // 2)
        if k % 2:
            rad_n *= prime
    ext_d, rad_d = sp.Integer(1), sp.Integer(1)
    for prime, k in sp.factorint(q.q).items():
        ext_d *= sp.Integer(prime) ** (k // 2)
        if k % 2:
            rad_d *= prime
    # sqrt(rad_n / rad_d) = sqrt(rad_n * rad_d) / rad_d
    return sp.Rational(ext_n, ext_d * rad_d), sign * rad_n * rad_d


def _sqrt_canonical(g: sp.Expr) -> sp.Expr:
    """Formal square root as an opaque atom over a canonical radicand.

    Perfect-square factors are extracted (sqrt(eps*y^2) -> y*sqrt(eps)),
    rational denominators are cleared, and numeric square parts are pulled
    out, so radicands are squarefree and the atoms stay algebraically
    independent generators.  Only sqrt(g)**2 = g is ever used downstream;
    the extraction fixes the branch.
    """
    g = _norm(g)
    if g.is_Rational:
        ext, rad = _sqrt_rational_parts(g)
        if rad == 1:
            return ext
        atom = _SQRT(rad)
        _norm_cache.setdefault(atom, atom)
        return _norm(ext * atom)
    num, den = sp.fraction(g)
    radicand = sp.expand(num * den)  # sqrt(num/den) = sqrt(num*den)/den
    coeff, factors = sp.factor_list(radicand)
    ext = sp.Integer(1)
    rad = sp.Integer(1)
    for base, k in factors:
        ext *= base ** (k // 2)
        if k % 2:
            rad *= base
    c_ext, c_rad = _sqrt_rational_parts(sp.Rational(coeff))
    rad = _norm(c_rad * sp.expand(rad))
    if rad == 1:
        return _norm(c_ext * ext / den)
    atom = _SQRT(rad)
    _norm_cache.setdefault(atom, atom)
    return _norm(c_ext * ext * atom / den)


def sqrt_(e: Expr) -> Expr:
    return Expr(_sqrt_canonical(e._s), _normalized=True)


# ---------------------------------------------------------------------------
# derivatives


def _dfunc(f: AppliedUndef, v: sp.Symbol, total: bool, jets_fixed: bool = False) -> sp.Expr:
    base, mi = _fparts(f)
    if base == "exp":
        (g,) = f.args
        return f * _derive(g, v, total, jets_fixed)
    if base == "arctan":
        (g,) = f.args
        return _derive(g, v, total, jets_fixed) / (1 + g ** 2)
    if base == "sqrt":
        (g,) = f.args
        return _derive(g, v, total, jets_fixed) / (2 * f)
    out = sp.Integer(0)
    for k, arg in enumerate(f.args):
        da = _derive(arg, v, total, jets_fixed)
        if da == 0:
            continue
        raised = tuple(m + 1 if i == k else m for i, m in enumerate(mi))
        out += sp.Function(_fname(base, raised))(*f.args) * da
    return out


def _derive(s: sp.Expr, v: sp.Symbol, total: bool, jets_fixed: bool = False) -> sp.Expr:
    if s.is_Number:
        return sp.Integer(0)
    if s.is_Symbol:
        jv = _jetvar_of(s)
        if jv is not None:
            if jets_fixed:
                return sp.Integer(0)
            if total:
                if jv.order >= MAX_JET_ORDER:
                    raise JetOrderError(f"total derivative of {jv} exceeds jet order {MAX_JET_ORDER}")
                return jv.raised(v.name).symbol
            if jv.order > 0:
                raise KernelError(f"jet coordinate {jv} encountered; use total_diff")
            return sp.Integer(1) if s == v else sp.Integer(0)
        return sp.Integer(1) if s == v else sp.Integer(0)
    if s.is_Add:
        return sp.Add(*[_derive(a, v, total, jets_fixed) for a in s.args])
    if s.is_Mul:
        terms = []
        args = s.args
        for i, a in enumerate(args):
            da = _derive(a, v, total, jets_fixed)
            if da == 0:
                continue
            terms.append(sp.Mul(*args[:i], da, *args[i + 1:]))
        return sp.Add(*terms)
    if s.is_Pow:
        b, e = s.as_base_exp()
        if not e.is_Rational:
            raise KernelError(f"unsupported exponent {e}")
        return e * b ** (e - 1) * _derive(b, v, total, jets_fixed)
    if isinstance(s, AppliedUndef):
        return _dfunc(s, v, total, jets_fixed)
    raise KernelError(f"cannot differentiate node {s!r}")


def diff(e: Expr, v: Expr | str) -> Expr:
    """Partial derivative on the (t, x, y, u)-space; jets of order >= 1 are rejected."""
    vs = _as_var_symbol(v)
    return Expr(_derive(e._s, vs, total=False))


def total_diff(e: Expr, v: Expr | str) -> Expr:
    """Total derivative D_v, prolonged through jet coordinates (order cap 3)."""
    vs = _as_var_symbol(v)
    if vs.name not in _COORD_NAMES:
        raise KernelError(f"total_diff variable must be one of {_COORD_NAMES}")
    return Expr(_derive(e._s, vs, total=True))


def ediff(e: Expr, v: Expr | str) -> Expr:
    """Explicit coordinate derivative: jets (including u) held fixed."""
    vs = _as_var_symbol(v)
    if vs.name not in _COORD_NAMES:
        raise KernelError(f"ediff variable must be one of {_COORD_NAMES}")
    return Expr(_derive(e._s, vs, total=False, jets_fixed=True))


def _as_var_symbol(v: Expr | str) -> sp.Symbol:
    if isinstance(v, str):
        s = sp.Symbol(v)
    elif isinstance(v, Expr) and v._s.is_Symbol:
        s = v._s
    else:
        raise KernelError(f"not a variable: {v!r}")
    jv = _jetvar_of(s)
    if jv is not None and jv.order > 0:
        raise KernelError("cannot differentiate with respect to a jet coordinate")
    return s


def _aderive(s: sp.Expr, a: sp.Symbol) -> sp.Expr:
    """Polynomial partial with respect to the atom `a`; every other atom is constant."""
    if s == a:
        return sp.Integer(1)
    if s.is_Number or s.is_Symbol:
        return sp.Integer(0)
    if isinstance(s, AppliedUndef):
        if s.has(a):
            raise KernelError(f"atom {a} occurs inside an opaque node {s}")
        return sp.Integer(0)
    if s.is_Add:
        return sp.Add(*[_aderive(t_, a) for t_ in s.args])
    if s.is_Mul:
        terms = []
        for i, f in enumerate(s.args):
            df = _aderive(f, a)
            if df == 0:
                continue
            terms.append(sp.Mul(*s.args[:i], df, *s.args[i + 1:]))
        return sp.Add(*terms)
    if s.is_Pow:
        b, e = s.as_base_exp()
        return e * b ** (e - 1) * _aderive(b, a)
    raise KernelError(f"cannot differentiate node {s!r}")


def adiff(e: Expr, atom: Expr) -> Expr:
    """Derivative with respect to an atomic expression (jet, variable, or an
    opaque function node), treating all other atoms as independent."""
    if not (atom._s.is_Symbol or isinstance(atom._s, AppliedUndef)):
        raise KernelError("adiff requires an atomic variable, jet, or function node")
    return Expr(_aderive(e._s, atom._s))


# ---------------------------------------------------------------------------
# substitution and zero-testing


def substitute(e: Expr, bindings: Mapping[Expr, Expr]) -> Expr:
    """Simultaneous one-pass substitution of variables / jet coordinates, then
    normalization.  A key may appear in its own replacement (e.g. x -> x/t):
    the substitution is applied once, not to a fixpoint."""
    table: dict[sp.Expr, sp.Expr] = {}
    for k, v in bindings.items():
        ks = k._s
        if not ks.is_Symbol:
            raise KernelError(f"binding key must be a variable or jet coordinate, got {k!r}")
        table[ks] = v._s
    if not table:
        return e
    return Expr(e._s.xreplace(table))


def substitute_function(e: Expr, base: str, replacement: Expr) -> Expr:
    """Replace an abstract function of the plain coordinates by an expression.

    Every atom `base[mi](t, x, y, ...)` is replaced by the corresponding
    partial derivative of `replacement` with respect to its (coordinate)
    arguments.  Used to push a reduction ansatz through a derived equation.
    """
    def walk(s: sp.Expr) -> sp.Expr:
        if isinstance(s, AppliedUndef):
            b, mi = _fparts(s)
            if b == base:
                for arg in s.args:
                    if not (arg.is_Symbol and arg.name in _COORD_NAMES):
                        raise KernelError(
                            f"substitute_function supports only plain coordinate arguments, got {arg}")
                out = replacement._s
                for k, arg in zip(mi, s.args):
                    for _ in range(k):
                        out = _derive(out, arg, total=False)
                return out
            return s.func(*[walk(a) for a in s.args])
        if s.args:
            return s.func(*[walk(a) for a in s.args])
        return s

    return Expr(walk(e._s))


def is_zero(e: Expr, eps_signs: Iterable[int] = (1, -1)) -> bool:
    """True iff the expression normalizes to zero under every requested
    signature instantiation (default: both eps = +1 and eps = -1)."""
    for sign in eps_signs:
        if sign not in (1, -1):
            raise KernelError("eps must be instantiated at +1 or -1")
        inst = e._s.xreplace({_EPS: sp.Integer(sign)})
        c = _norm(inst)
        if c.has(sp.zoo, sp.nan, sp.oo):
            raise KernelError(f"expression undefined at eps={sign}")
        if c != 0:
            return False
    return True


def rational_value(e: Expr) -> Fraction | None:
    if e._s.is_Rational:
        return Fraction(int(e._s.p), int(e._s.q))
    return None


def free_symbols(e: Expr) -> set[str]:
    return {s.name for s in e._s.free_symbols}


def jet_atoms(e: Expr) -> list[JetVar]:
    out = set()
    for s in e._s.free_symbols:
        jv = _jetvar_of(s)
        if jv is not None:
            out.add(jv)
    return sorted(out)


def function_atoms(e: Expr) -> list[tuple[str, tuple[int, ...], tuple[Expr, ...]]]:
    """All abstract-function atoms as (base, multi-index, args) triples."""
    out = []
    seen = set()
    for f in e._s.atoms(AppliedUndef):
        base, mi = _fparts(f)
        if base in _ELEMENTARY:
            continue
        key = (base, mi, f.args)
        if key not in seen:
            seen.add(key)
            out.append((base, mi, tuple(Expr(a, _normalized=True) for a in f.args)))
    return sorted(out, key=lambda r: (r[0], r[1], tuple(str(a._s) for a in r[2])))
