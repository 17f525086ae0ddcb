"""Kernel oracle tests: parsing, differentiation, substitution, zero-testing."""

import pytest

from kgsym import parse, to_string, diff, total_diff, substitute, is_zero
from kgsym.grammar import ParseError
from kgsym.kernel import (
    JetOrderError,
    JetVar,
    KernelError,
    ZeroDivisionExprError,
    jet,
    rational,
    variable,
)


class TestParse:
    def test_sum_of_three_terms(self):
        e = parse("eps*t^2 + x^2 + y^2")
        assert e == parse("x^2 + eps*t^2 + y^2")
        assert e - parse("eps*t^2") == parse("x^2+y^2")

    def test_abstract_function_with_multiindex(self):
        e = parse("V[1,0](x/t, y/t)")
        assert to_string(e) == "V[1,0](x/t, y/t)"

    def test_jet_multiindex_symmetry(self):
        assert parse("u_tx - u_xt") == 0

    def test_rational_literal(self):
        assert parse("3/2") == rational(3, 2)

    def test_unknown_function(self):
        with pytest.raises(ParseError, match="unknown function"):
            parse("Q(x)")

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse("x + * y")
        assert err.value.pos == 4

    def test_non_integer_exponent(self):
        with pytest.raises(ParseError, match="non-integer exponent"):
            parse("x^y")

    def test_jet_order_cap(self):
        with pytest.raises(ParseError):
            parse("u_ttxx")

    def test_bad_jet_suffix(self):
        with pytest.raises(ParseError):
            parse("u_z")

    def test_division_by_zero_expression(self):
        with pytest.raises(ParseError, match="division by zero"):
            parse("x/(y - y)")


class TestDiff:
    def test_arctan_chain_rule(self):
        assert diff(parse("arctan(x/y)"), "x") == parse("y/(x^2+y^2)")

    def test_abstract_chain_rule(self):
        assert diff(parse("V(x/t, y/t)"), "x") == parse("(1/t)*V[1,0](x/t, y/t)")

    def test_polynomial(self):
        assert diff(parse("eps*t^2 + x^2"), "t") == parse("2*eps*t")

    def test_sqrt(self):
        got = diff(parse("sqrt(eps*t^2+x^2)"), "t")
        assert is_zero(got - parse("eps*t/sqrt(eps*t^2+x^2)"))

    def test_constant(self):
        assert diff(parse("5/7"), "x") == 0
        assert diff(parse("a"), "x") == 0

    def test_jet_rejected(self):
        with pytest.raises(KernelError, match="jet"):
            diff(parse("u_x"), "x")

    def test_u_is_a_coordinate(self):
        assert diff(parse("c1*u"), "u") == parse("c1")
        assert diff(parse("c1*u"), "t") == 0


class TestTotalDiff:
    def test_definition(self):
        assert total_diff(parse("u"), "x") == parse("u_x")

    def test_product_and_chain(self):
        got = total_diff(parse("V(x,y)*u^2"), "x")
        assert got == parse("V[1,0](x,y)*u^2 + 2*V(x,y)*u*u_x")

    def test_product_rule_on_jets(self):
        assert total_diff(parse("u_x*u_t"), "t") == parse("u_tx*u_t + u_x*u_tt")

    def test_order_cap(self):
        with pytest.raises(JetOrderError):
            total_diff(parse("u_txy"), "y")


class TestSubstitute:
    def test_on_shell_replacement(self):
        got = substitute(parse("u_tt + x"), {jet("tt"): parse("-eps*(u_xx+u_yy+V(x,y)*u)")})
        assert got == parse("-eps*(u_xx+u_yy+V(x,y)*u) + x")

    def test_empty_bindings_is_normalization(self):
        e = parse("x + x")
        assert substitute(e, {}) == e

    def test_argument_rewrite(self):
        assert substitute(parse("V(x,y)"), {variable("x"): parse("x/t")}) == parse("V(x/t, y)")

    def test_simultaneous(self):
        got = substitute(parse("x*y"), {variable("x"): parse("y"), variable("y"): parse("x")})
        assert got == parse("x*y")


class TestIsZero:
    def test_jet_symmetry(self):
        assert is_zero(parse("u_tx - u_xt"))

    def test_polynomial_identity(self):
        assert is_zero(parse("(x^2-y^2) - (x-y)*(x+y)"))

    def test_independent_indeterminates(self):
        assert not is_zero(parse("V[1,0](x,y) - V[0,1](x,y)"))

    def test_eps_square_instantiation(self):
        assert is_zero(parse("eps^2 - 1"))
        assert not is_zero(parse("eps - 1"))

    def test_sqrt_relation(self):
        s = parse("sqrt(eps*t^2+x^2)")
        g = parse("eps*t^2+x^2")
        assert is_zero(s * s - g)
        assert is_zero(g / s - s)

    def test_single_sign(self):
        assert is_zero(parse("eps - 1"), eps_signs=(1,))

    def test_undefined_at_signature(self):
        with pytest.raises(KernelError, match="undefined"):
            is_zero(parse("x/(eps-1)"))


class TestJetVar:
    def test_sorted(self):
        assert JetVar(("x", "t")).index == ("t", "x")
        assert JetVar(("x", "t")).name == "u_tx"

    def test_order_cap(self):
        with pytest.raises(JetOrderError):
            JetVar(("t", "t", "x", "y"))


def test_zero_division_guard():
    with pytest.raises(ZeroDivisionExprError):
        parse("x") / (parse("y") - parse("y"))
