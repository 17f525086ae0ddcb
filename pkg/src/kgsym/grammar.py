"""Expression grammar: recursive-descent parser and canonical printer.

Grammar (ASCII):

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('+' | '-') unary | power
    power    := atom ('^' exponent)?
    exponent := INT | '-' INT | '(' '-'? INT ')'
    atom     := INT | IDENT call? | '(' expr ')'
    call     := ('[' INT (',' INT)* ']')? '(' expr (',' expr)* ')'

Identifiers: the coordinates t, x, y, the signature eps, the dependent
variable u, jets u_t ... u_tyy (suffix letters in any order, canonicalized),
free constants (a, b, kappa1, ...), and function applications.  exp, arctan
and sqrt are the elementary functions; any other applied name must be in
the caller's allowed set of abstract functions (default: V, W).
Rational literals are written with '/': 3/2.
"""

from __future__ import annotations

import re
from fractions import Fraction

import sympy as sp
from sympy.core.function import AppliedUndef

from . import kernel
from .kernel import Expr, KernelError

__all__ = ["parse", "to_string", "ParseError", "DEFAULT_FUNCTIONS"]

DEFAULT_FUNCTIONS = frozenset({"V", "W"})
_ELEMENTARY = frozenset({"exp", "arctan", "sqrt"})

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>[0-9]+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tok: str | None = None
        self.kind: str | None = None
        self.tok_pos = 0
        self.advance()

    def advance(self):
        if self.pos >= len(self.text):
            rest = ""
        else:
            rest = self.text[self.pos:]
        if not rest.strip():
            self.tok, self.kind, self.tok_pos = None, None, len(self.text)
            self.pos = len(self.text)
            return
        m = _TOKEN_RE.match(self.text, self.pos)
        if m is None:
            raise ParseError(f"unexpected character {self.text[self.pos]!r}", self.pos)
        self.tok_pos = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        for kind in ("int", "ident", "op"):
            if m.group(kind) is not None:
                self.tok, self.kind = m.group(kind), kind
                break
        self.pos = m.end()

    def expect(self, op: str):
        if self.kind != "op" or self.tok != op:
            raise ParseError(f"expected {op!r}, found {self.tok!r}", self.tok_pos)
        self.advance()


class _Parser:
    def __init__(self, text: str, functions: frozenset[str]):
        self.lex = _Lexer(text)
        self.functions = functions

    def parse(self) -> Expr:
        e = self.expr()
        if self.lex.tok is not None:
            raise ParseError(f"trailing input {self.lex.tok!r}", self.lex.tok_pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.lex.kind == "op" and self.lex.tok in "+-":
            op = self.lex.tok
            self.lex.advance()
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.lex.kind == "op" and self.lex.tok in "*/":
            op = self.lex.tok
            pos = self.lex.tok_pos
            self.lex.advance()
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                try:
                    e = e / rhs
                except KernelError:
                    raise ParseError("division by zero expression", pos) from None
        return e

    def unary(self) -> Expr:
        if self.lex.kind == "op" and self.lex.tok in "+-":
            op = self.lex.tok
            self.lex.advance()
            e = self.unary()
            return e if op == "+" else -e
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.lex.kind == "op" and self.lex.tok == "^":
            pos = self.lex.tok_pos
            self.lex.advance()
            k = self.exponent(pos)
            try:
                return base ** k
            except KernelError:
                raise ParseError("negative power of zero expression", pos) from None
        return base

    def exponent(self, pos: int) -> int:
        sign = 1
        parens = False
        if self.lex.kind == "op" and self.lex.tok == "(":
            parens = True
            self.lex.advance()
        if self.lex.kind == "op" and self.lex.tok == "-":
            sign = -1
            self.lex.advance()
        if self.lex.kind != "int":
            raise ParseError("non-integer exponent", pos)
        k = sign * int(self.lex.tok)
        self.lex.advance()
        if parens:
            self.lex.expect(")")
        return k

    def atom(self) -> Expr:
        lex = self.lex
        if lex.kind == "int":
            v = int(lex.tok)
            lex.advance()
            return kernel.integer(v)
        if lex.kind == "op" and lex.tok == "(":
            lex.advance()
            e = self.expr()
            lex.expect(")")
            return e
        if lex.kind == "ident":
            name = lex.tok
            pos = lex.tok_pos
            lex.advance()
            if lex.kind == "op" and lex.tok in ("(", "["):
                return self.call(name, pos)
            try:
                return kernel.variable(name)
            except KernelError as err:
                raise ParseError(str(err), pos) from None
        raise ParseError(f"unexpected token {lex.tok!r}", lex.tok_pos)

    def call(self, name: str, pos: int) -> Expr:
        lex = self.lex
        mi: list[int] | None = None
        if lex.tok == "[":
            if name in _ELEMENTARY:
                raise ParseError(f"{name} takes no derivative multi-index", pos)
            lex.advance()
            mi = [self.nonneg_int()]
            while lex.kind == "op" and lex.tok == ",":
                lex.advance()
                mi.append(self.nonneg_int())
            lex.expect("]")
        lex.expect("(")
        args = [self.expr()]
        while lex.kind == "op" and lex.tok == ",":
            lex.advance()
            args.append(self.expr())
        lex.expect(")")
        if name in _ELEMENTARY:
            if len(args) != 1:
                raise ParseError(f"{name} takes one argument", pos)
            return {"exp": kernel.exp_, "arctan": kernel.arctan_, "sqrt": kernel.sqrt_}[name](args[0])
        if name not in self.functions:
            raise ParseError(f"unknown function name {name!r}", pos)
        if mi is not None and len(mi) != len(args):
            raise ParseError(f"{name}: multi-index arity {len(mi)} != argument count {len(args)}", pos)
        return kernel.afunc(name, args, mi)

    def nonneg_int(self) -> int:
        if self.lex.kind != "int":
            raise ParseError("expected integer", self.lex.tok_pos)
        k = int(self.lex.tok)
        self.lex.advance()
        return k


def parse(text: str, functions: frozenset[str] | set[str] = DEFAULT_FUNCTIONS) -> Expr:
    """Parse `text` into a normalized expression."""
    return _Parser(text, frozenset(functions)).parse()


# ---------------------------------------------------------------------------
# printing


def _print_rational(q: sp.Rational) -> str:
    if q.q == 1:
        return str(q.p)
    return f"{q.p}/{q.q}"


def _paren(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


def _print_pow(base: sp.Expr, e: sp.Rational) -> str:
    # Half-integer exponents print through sqrt so output stays in the grammar.
    if e.q == 2:
        inner = f"sqrt({_print(base, 0)})"
        p = int(e.p)
        if p == 1:
            return inner
        return f"{inner}^{p}" if p > 0 else f"{inner}^({p})"
    bs = _print(base, 3)
    k = int(e)
    return f"{bs}^{k}" if k >= 0 else f"{bs}^({k})"


def _split_den(factors) -> tuple[list, list]:
    num, den = [], []
    for f in factors:
        if f.is_Pow:
            b, e = f.as_base_exp()
            if e.is_Rational and e < 0:
                den.append(sp.Pow(b, -e))
                continue
        if f.is_Rational and f.q != 1:
            if f.p != 1:
                num.append(sp.Integer(f.p))
            den.append(sp.Integer(f.q))
            continue
        num.append(f)
    return num, den


def _print_mul(s: sp.Expr) -> str:
    coeff, rest = s.as_coeff_Mul()
    sign = ""
    if coeff.is_negative:
        sign = "-"
        coeff = -coeff
    factors = list(sp.Mul.make_args(rest))
    if coeff != 1:
        factors = [coeff] + factors
    num, den = _split_den(factors)
    num_s = "*".join(_print(f, 2) for f in num) if num else "1"
    if not den:
        return sign + num_s
    if len(den) == 1:
        den_s = _print(den[0], 2)
        if not den_s.startswith("(") and not (den[0].is_Symbol or den[0].is_Integer
                                              or den[0].is_Pow or isinstance(den[0], AppliedUndef)):
            den_s = f"({den_s})"
    else:
        den_s = "(" + "*".join(_print(f, 2) for f in den) + ")"
    return f"{sign}{num_s}/{den_s}"


def _print(s: sp.Expr, level: int) -> str:
    """level: 0 top, 1 inside Add, 2 inside Mul, 3 power base."""
    if s is sp.I:
        return "sqrt(-1)" if level < 3 else "(sqrt(-1))"
    if s.is_Rational:
        out = _print_rational(s)
        return _paren(out, level >= 2 and (s < 0 or s.q != 1))
    if s.is_Symbol:
        return s.name
    if s.is_Add:
        parts = []
        for i, term in enumerate(s.as_ordered_terms()):
            txt = _print(term, 1)
            if i == 0:
                parts.append(txt)
            elif txt.startswith("-"):
                parts.append("- " + txt[1:])
            else:
                parts.append("+ " + txt)
        return _paren(" ".join(parts), level >= 2)
    if s.is_Mul:
        out = _print_mul(s)
        return _paren(out, level >= 3 or (level >= 2 and out.startswith("-")))
    if s.is_Pow:
        b, e = s.as_base_exp()
        if e.is_Rational and not e.is_Integer and e.q != 2:
            raise KernelError(f"cannot print exponent {e}")
        if e.is_Rational and e < 0:
            out = _print_mul(s)
            return _paren(out, level >= 3)
        return _print_pow(b, e)
    if isinstance(s, AppliedUndef):
        name = s.func.__name__
        args = ", ".join(_print(a, 0) for a in s.args)
        return f"{name}({args})"
    raise KernelError(f"cannot print node {s!r}")


def to_string(e: Expr) -> str:
    """Canonical text form; parse(to_string(e)) reproduces e exactly."""
    return _print(e._s, 0)
