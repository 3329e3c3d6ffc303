"""Tests for the expression parser and session files."""

import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

from src.algebra_core import FieldSpec, MonomialOrder, RingContext
from src.errors import ParseError, PreconditionError, UnknownIdentifierError
from src.parser import (
    load_session,
    parse_generators,
    parse_polynomial,
    parse_ring,
    parse_session,
    tokenize,
)

QXY = RingContext(("x", "y"))
X, Y = QXY.variable("x"), QXY.variable("y")


class TestTokenize:
    """Tests for the tokenizer."""

    def test_kinds_and_columns(self):
        """Tokens should carry kinds and 1-based columns."""
        tokens = tokenize("x^2 + 3")
        assert [t.kind for t in tokens] == ["name", "pow", "nat", "plus", "nat", "end"]
        assert [t.column for t in tokens] == [1, 2, 3, 5, 7, 8]

    def test_unexpected_character(self):
        """A stray character should be located."""
        with pytest.raises(ParseError) as exc:
            tokenize("x + $", line=4)
        assert (exc.value.line, exc.value.column) == (4, 5)


class TestParsePolynomial:
    """Tests for single expressions."""

    def test_basic(self):
        """Should parse sums of products and powers."""
        assert parse_polynomial("y^2 - x^8", QXY) == Y**2 - X**8

    def test_implicit_multiplication(self):
        """Juxtaposition should multiply."""
        assert parse_polynomial("2x y", QXY) == 2 * X * Y
        assert parse_polynomial("(x + 1)(x - 1)", QXY) == X**2 - 1

    def test_rational_coefficients(self):
        """n/d should be an exact rational."""
        assert parse_polynomial("3/2*x", QXY).coefficient((1, 0)) == Fraction(3, 2)

    def test_leading_sign(self):
        """A leading minus should negate the first term."""
        assert parse_polynomial("-x + y", QXY) == Y - X

    def test_parenthesized_power(self):
        """Powers should apply to parenthesized expressions."""
        assert parse_polynomial("(x + y)^2", QXY) == X**2 + 2 * X * Y + Y**2

    def test_canonical_text_round_trip(self):
        """Canonical text should parse back to the same polynomial."""
        p = Fraction(-3, 4) * X**3 * Y + 5 * Y**2 - 7
        assert parse_polynomial(p.to_text(), QXY) == p

    def test_zero_denominator(self):
        """Division by zero should be a parse error."""
        with pytest.raises(ParseError):
            parse_polynomial("x/0", QXY)
        with pytest.raises(ParseError):
            parse_polynomial("1/0", QXY)

    def test_unknown_variable(self):
        """Names outside the ring should be unknown identifiers."""
        with pytest.raises(UnknownIdentifierError) as exc:
            parse_polynomial("x + z", QXY, line=3)
        assert (exc.value.line, exc.value.column) == (3, 5)

    def test_unbalanced(self):
        """Missing parentheses should be reported."""
        with pytest.raises(ParseError, match="expected '\\)'"):
            parse_polynomial("(x + y", QXY)

    def test_dangling_operator(self):
        """A trailing operator should be reported."""
        with pytest.raises(ParseError, match="end of input"):
            parse_polynomial("x +", QXY)

    def test_prime_field(self):
        """Coefficients should reduce modulo p."""
        ring = RingContext(("x",), FieldSpec.prime(7))
        assert parse_polynomial("8x + 1/2", ring).to_text() == "x + 4"


class TestParseGenerators:
    """Tests for generator lists."""

    def test_list(self):
        """Should split on commas."""
        assert parse_generators("x^6, x^2*y", QXY) == [X**6, X**2 * Y]

    def test_maximal_ideal_shorthand(self):
        """m^2 should expand to all monomials of degree two."""
        assert parse_generators("m^2", QXY) == [X**2, X * Y, Y**2]
        assert parse_generators("m, x^2", QXY) == [X, Y, X**2]

    def test_shorthand_must_stand_alone(self):
        """m inside an expression should be rejected."""
        with pytest.raises(ParseError):
            parse_generators("m*x", QXY)
        with pytest.raises(ParseError):
            parse_generators("x + m", QXY)

    def test_zero_power(self):
        """m^0 should be rejected."""
        with pytest.raises(ParseError):
            parse_generators("m^0", QXY)

    def test_variable_named_m(self):
        """A ring variable m should disable the shorthand."""
        ring = RingContext(("m", "n"))
        assert parse_generators("m^2", ring) == [ring.variable("m") ** 2]

    def test_single_polynomial_rejects_shorthand(self):
        """parse_polynomial should not expand m."""
        with pytest.raises(UnknownIdentifierError):
            parse_polynomial("m^2", QXY)


class TestParseRing:
    """Tests for ring descriptors."""

    def test_rationals(self):
        """Q[x,y] should be the rational plane."""
        assert parse_ring("Q[x,y]") == QXY

    def test_prime_prefixes(self):
        """F7 and GF(7) prefixes should give F_7."""
        assert parse_ring("F7[x]").field == FieldSpec.prime(7)
        assert parse_ring("GF(7)[x, y, z]").variables == ("x", "y", "z")

    def test_missing_prefix(self):
        """No prefix should mean the given field, rationals by default."""
        assert parse_ring("[x]").field.is_rational
        assert parse_ring("[x]", field=FieldSpec.prime(5)).field == FieldSpec.prime(5)

    def test_explicit_field_overrides(self):
        """An explicit field should win over the prefix."""
        assert parse_ring("Q[x]", field=FieldSpec.prime(3)).field == FieldSpec.prime(3)

    def test_order(self):
        """The requested order should be applied."""
        assert parse_ring("Q[x,y]", MonomialOrder.LEX).order == MonomialOrder.LEX

    def test_malformed(self):
        """Malformed descriptors should be parse errors."""
        for text in ("Q(x,y)", "Q[x,,y]", "Q[x,2y]", "Q[x,x]", "R[x]"):
            with pytest.raises(ParseError):
                parse_ring(text)


SESSION = """\
# (x^6, x^2 y) on y^2 = x^8
ring Q[x,y]
mod y^2 - x^8
ideal I = x^6, x^2*y
ideal M = m
curve y^2 - x^8

coeffs I
hironaka I
delta
"""


class TestSession:
    """Tests for session files."""

    def test_declarations(self):
        """Should collect ring, ideals, curve and commands."""
        session = parse_session(SESSION)
        assert session.ring.describe() == "Q[x,y]/(-x^8 + y^2)"
        assert set(session.ideals) == {"I", "M"}
        assert len(session.ideals["M"]) == 2
        assert session.curve.to_text() == "-x^8 + y^2"
        assert [(c.name, c.ideal, c.line) for c in session.commands] == [
            ("coeffs", "I", 8),
            ("hironaka", "I", 9),
            ("delta", None, 10),
        ]

    def test_dimension(self):
        """dim should declare the expected dimension."""
        session = parse_session("ring Q[x,y,z]\ndim 3\n")
        assert session.ring.dimension == 3

    def test_statement_before_ring(self):
        """Everything should follow the ring declaration."""
        with pytest.raises(ParseError) as exc:
            parse_session("ideal I = x\nring Q[x]\n")
        assert exc.value.line == 1

    def test_ring_twice(self):
        """A second ring should be rejected."""
        with pytest.raises(ParseError):
            parse_session("ring Q[x]\nring Q[y]\n")

    def test_mod_after_ideal(self):
        """mod should precede ideal declarations."""
        with pytest.raises(ParseError):
            parse_session("ring Q[x,y]\nideal I = x\nmod x*y\n")

    def test_unknown_statement(self):
        """Unknown keywords should be located."""
        with pytest.raises(ParseError) as exc:
            parse_session("ring Q[x]\n  frobnicate I\n")
        assert (exc.value.line, exc.value.column) == (2, 3)

    def test_undeclared_ideal(self):
        """Commands should name declared ideals."""
        with pytest.raises(UnknownIdentifierError):
            parse_session("ring Q[x,y]\ncoeffs J\n")

    def test_curve_commands_need_curve(self):
        """delta without a curve should be rejected."""
        with pytest.raises(UnknownIdentifierError):
            parse_session("ring Q[x,y]\ndelta\n")

    def test_generator_error_column(self):
        """Errors inside generator lists should point at the token."""
        with pytest.raises(UnknownIdentifierError) as exc:
            parse_session("ring Q[x,y]\nideal I = x, q\n")
        assert (exc.value.line, exc.value.column) == (2, 14)

    def test_no_ring(self):
        """A file without a ring should be rejected."""
        with pytest.raises(ParseError):
            parse_session("# empty\n")

    def test_load_session(self):
        """Should read a session from disk."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "pair.hs"
            path.write_text(SESSION)
            assert len(load_session(path).commands) == 3

    def test_missing_file(self):
        """A missing file should be a precondition error."""
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(PreconditionError):
                load_session(Path(tmpdir) / "absent.hs")
