"""Tests for the literal parser."""

from fractions import Fraction

import pytest

from cs_fermionic.algebra import BETA, BetaScalar, PPoly, XPoly
from cs_fermionic.errors import ParseError
from cs_fermionic.hamiltonians import h_limit, hk_explicit_limit
from cs_fermionic.parser import (
    parse_pdiffop,
    parse_poly,
    parse_ppoly,
    parse_xpoly,
    tokenize,
)
from cs_fermionic.pdiff import PDiffOp
from cs_fermionic.symfun import elementary_in_p, homogeneous_in_p, vandermonde

p0, p1, p2 = PPoly.p(0), PPoly.p(1), PPoly.p(2)


class TestTokenize:
    """Test the tokenizer."""

    def test_tokens_carry_positions(self):
        """Each token records where it starts."""
        tokens = tokenize("3/2*p12 ^ 2")
        assert [(t.kind, t.text, t.position) for t in tokens] == [
            ("number", "3/2", 0),
            ("op", "*", 3),
            ("symbol", "p12", 4),
            ("op", "^", 8),
            ("number", "2", 10),
            ("end", "", 11),
        ]

    def test_unexpected_character(self):
        """Unknown characters are reported with their position."""
        with pytest.raises(ParseError, match=r"character .\$. at position 5"):
            tokenize("p1 + $")


class TestParsePoly:
    """Test parsing into the three target types."""

    def test_ppoly(self):
        """Coefficients may use b and N."""
        assert parse_poly("3/2*b*p1^2 - p0") == p1**2 * (BETA * Fraction(3, 2)) - p0
        assert parse_poly("N*p1") == p1 * BetaScalar.formal_n()
        assert parse_poly("2*b - 1/2") == PPoly.const(
            BETA * 2 - BetaScalar.const(Fraction(1, 2))
        )

    def test_unary_minus_and_parentheses(self):
        """A leading sign applies to the whole first term."""
        assert parse_poly("-(p1 - p2)") == p2 - p1
        assert parse_poly("+p1*(1 + b)") == p1 * (1 + BETA)

    def test_xpoly_variable_count(self):
        """The highest x index fixes the number of variables."""
        value = parse_poly("x1 - x3")
        assert isinstance(value, XPoly)
        assert value.nvars == 3
        assert value == XPoly.var(1, 3) - XPoly.var(3, 3)

    def test_operator_products_compose(self):
        """d1*p1 is the composition p1*d1 + 1."""
        expected = PDiffOp.p(1) * PDiffOp.d(1) + PDiffOp.scalar(1)
        assert parse_poly("d1*p1") == expected
        assert parse_poly("d1*p1") == parse_poly("p1*d1 + 1")

    @pytest.mark.parametrize(
        "value",
        [
            elementary_in_p(3),
            homogeneous_in_p(3) * (1 + BETA) - p0 * p2,
            vandermonde(3),
            XPoly.var(2, 2) ** 3 * BETA - 1,
            hk_explicit_limit(2, 3),
            h_limit(3),
        ],
        ids=lambda v: type(v).__name__,
    )
    def test_printed_forms_parse_back(self, value):
        """Printing then parsing gives the same object."""
        if isinstance(value, XPoly):
            assert parse_xpoly(str(value), value.nvars) == value
        else:
            assert parse_poly(str(value)) == value


class TestParseErrors:
    """Test error reporting."""

    @pytest.mark.parametrize(
        "text, message, position",
        [
            ("1/0 + p1", "Zero denominator", 0),
            ("x1 + p1", "Cannot mix x variables", 5),
            ("d0 + p1", "no derivative in p0", 0),
            ("x0", "start at x1", 0),
            ("", "Empty literal", 0),
            ("   ", "Empty literal", 0),
            ("p1 p2", "Unexpected token 'p2'", 3),
            ("p1^b", "non-negative integer", 3),
            ("p1^-1", "non-negative integer", 3),
            ("p1^1/2", "non-negative integer", 3),
            ("(p1 + 1", "Expected '\\)'", 7),
            ("p1 +", "Unexpected end of input", 4),
            ("p1 + )", "Unexpected token '\\)'", 5),
        ],
    )
    def test_errors_report_position(self, text, message, position):
        """Malformed literals raise ParseError at the offending character."""
        with pytest.raises(ParseError, match=message) as exc_info:
            parse_poly(text)
        assert exc_info.value.position == position
        assert exc_info.value.details == {"position": position}


class TestTypedParsers:
    """Test parse_ppoly and parse_xpoly."""

    def test_parse_ppoly_rejects_operators(self):
        """Operators are not p-polynomials."""
        with pytest.raises(ParseError, match="got PDiffOp"):
            parse_ppoly("p1*d1")
        assert parse_ppoly("p2 + 1") == p2 + 1

    def test_parse_xpoly_embeds(self):
        """Literals in fewer variables are embedded."""
        assert parse_xpoly("x1*x2", 3) == XPoly.var(1, 3) * XPoly.var(2, 3)
        assert parse_xpoly("3", 2) == XPoly.const(3, 2)

    def test_parse_xpoly_too_many_variables(self):
        """A literal cannot use more variables than requested."""
        with pytest.raises(ParseError, match="uses x3 but only 2 variables exist"):
            parse_xpoly("x3", 2)

    def test_parse_xpoly_rejects_p(self):
        """p-polynomials are not x-polynomials."""
        with pytest.raises(ParseError, match="got PPoly"):
            parse_xpoly("p1", 2)

    def test_given_variable_count(self):
        """An explicit count keeps variables the literal does not mention."""
        value = XPoly.var(1, 3) ** 2
        assert parse_poly(str(value), 3) == value
        assert parse_poly("x1", 3).nvars == 3
        with pytest.raises(ParseError, match="uses x4") as exc_info:
            parse_poly("x1 + x4", 3)
        assert exc_info.value.position == 5

    def test_parse_pdiffop(self):
        """Literals without derivatives parse as multiplication operators."""
        zero = parse_pdiffop("0")
        assert isinstance(zero, PDiffOp)
        assert zero == PDiffOp()
        assert parse_pdiffop("p1") == PDiffOp.p(1)
        assert parse_pdiffop(str(PDiffOp())) == PDiffOp()
        with pytest.raises(ParseError, match="got XPoly"):
            parse_pdiffop("x1")
