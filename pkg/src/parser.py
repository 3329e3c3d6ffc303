"""Expression parser and session-file interpreter.

Grammar for polynomials (whitespace is insignificant)::

    expression := ['+' | '-'] term (('+' | '-') term)*
    term       := factor (['*'] factor)*
    factor     := nat ['/' nat] | name ['^' nat] | '(' expression ')' ['^' nat]

In generator lists ``m^k`` (or ``m``) stands for every monomial of total
degree k, unless the ring has a variable called ``m``.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from src.algebra_core import FieldSpec, MonomialOrder, Polynomial, RingContext
from src.errors import ParseError, PreconditionError, UnknownIdentifierError

logger = logging.getLogger(__name__)

MAXIMAL_IDEAL_NAME = "m"

_TOKEN_PATTERNS = {
    "name": r"[A-Za-z_][A-Za-z0-9_]*",
    "nat": r"\d+",
    "lpar": r"\(",
    "rpar": r"\)",
    "pow": r"\^",
    "mul": r"\*",
    "div": r"/",
    "plus": r"\+",
    "minus": r"-",
    "comma": r",",
    "skip": r"[ \t\r\n]+",
    "error": r".",
}
_TOKEN_REGEX = re.compile("|".join(f"(?P<{name}>{text})" for name, text in _TOKEN_PATTERNS.items()))
_RING_REGEX = re.compile(
    r"\s*(?P<field>[A-Za-z]+\d*|GF\(\d+\))?\s*\[(?P<vars>[^\]]*)\]\s*\Z"
)


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    """Split text into tokens, ending with an ``end`` token.

    Args:
        text: Source text
        line: Line number reported for the text
        column: Column of the text's first character

    Raises:
        ParseError: On a character outside the grammar
    """
    tokens = []
    for mo in _TOKEN_REGEX.finditer(text):
        kind = str(mo.lastgroup)
        where = column + mo.start()
        if kind == "skip":
            continue
        if kind == "error":
            raise ParseError(f"unexpected character '{mo.group()}'", line, where)
        tokens.append(Token(kind, mo.group(), line, where))
    tokens.append(Token("end", "", line, column + len(text)))
    return tokens


class PolynomialParser:
    """Recursive-descent parser over one token list."""

    def __init__(self, ring: RingContext, tokens: list[Token], allow_maximal: bool = False) -> None:
        self.ring = ring
        self.tokens = tokens
        self.pos = 0
        self.allow_maximal = allow_maximal and MAXIMAL_IDEAL_NAME not in ring.variables

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self, kind: str | None = None) -> Token:
        token = self.current
        if kind is not None and token.kind != kind:
            expected = "end of input" if kind == "end" else f"'{_describe(kind)}'"
            found = "end of input" if token.kind == "end" else f"'{token.value}'"
            raise ParseError(f"expected {expected}, found {found}", token.line, token.column)
        self.pos += 1
        return token

    def _natural(self) -> int:
        return int(self.advance("nat").value)

    def generators(self) -> list[Polynomial]:
        """Comma separated generator list."""
        gens = self._generator()
        while self.current.kind == "comma":
            self.advance()
            gens.extend(self._generator())
        self.advance("end")
        return gens

    def _generator(self) -> list[Polynomial]:
        token = self.current
        if self.allow_maximal and token.kind == "name" and token.value == MAXIMAL_IDEAL_NAME:
            self.advance()
            degree = 1
            if self.current.kind == "pow":
                self.advance()
                degree = self._natural()
            if self.current.kind not in ("comma", "end"):
                raise ParseError(
                    f"'{MAXIMAL_IDEAL_NAME}^k' must stand alone as a generator",
                    self.current.line,
                    self.current.column,
                )
            if degree < 1:
                raise ParseError("maximal ideal power must be positive", token.line, token.column)
            return self.ring.maximal_ideal_generators(degree)
        return [self.expression()]

    def polynomial(self) -> Polynomial:
        """A single expression spanning all tokens."""
        result = self.expression()
        self.advance("end")
        return result

    def expression(self) -> Polynomial:
        sign = 1
        if self.current.kind in ("plus", "minus"):
            sign = -1 if self.advance().kind == "minus" else 1
        result = self.term() * sign
        while self.current.kind in ("plus", "minus"):
            op = self.advance().kind
            rhs = self.term()
            result = result + rhs if op == "plus" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.current.kind in ("mul", "nat", "name", "lpar"):
            if self.current.kind == "mul":
                self.advance()
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        token = self.current
        if token.kind == "nat":
            self.advance()
            value = Fraction(int(token.value))
            if self.current.kind == "div":
                self.advance()
                denominator = self.current
                if self._natural() == 0:
                    raise ParseError("zero denominator", denominator.line, denominator.column)
                value /= int(denominator.value)
            return self.ring.constant(value)

        if token.kind == "name":
            self.advance()
            if token.value not in self.ring.variables:
                if token.value == MAXIMAL_IDEAL_NAME and self.allow_maximal:
                    raise ParseError(
                        f"'{MAXIMAL_IDEAL_NAME}^k' must stand alone as a generator",
                        token.line,
                        token.column,
                    )
                raise UnknownIdentifierError(
                    f"unknown variable '{token.value}' in {self.ring.describe()}",
                    token.line,
                    token.column,
                )
            return self._power(self.ring.variable(token.value))

        if token.kind == "lpar":
            self.advance()
            inner = self.expression()
            self.advance("rpar")
            return self._power(inner)

        found = "end of input" if token.kind == "end" else f"'{token.value}'"
        raise ParseError(f"expected a term, found {found}", token.line, token.column)

    def _power(self, base: Polynomial) -> Polynomial:
        if self.current.kind != "pow":
            return base
        self.advance()
        return base ** self._natural()


def _describe(kind: str) -> str:
    symbols = {"rpar": ")", "lpar": "(", "pow": "^", "comma": ",", "nat": "number", "name": "name"}
    return symbols.get(kind, kind)


def parse_polynomial(text: str, ring: RingContext, line: int = 1, column: int = 1) -> Polynomial:
    """Parse one polynomial of ``ring``.

    Raises:
        ParseError: On a syntax error or zero denominator
        UnknownIdentifierError: On a name that is not a variable of the ring
    """
    return PolynomialParser(ring, tokenize(text, line, column)).polynomial()


def parse_generators(text: str, ring: RingContext, line: int = 1, column: int = 1) -> list[Polynomial]:
    """Parse a comma separated generator list, expanding ``m^k``."""
    return PolynomialParser(ring, tokenize(text, line, column), allow_maximal=True).generators()


def parse_ring(
    text: str,
    order: MonomialOrder = MonomialOrder.DEGREVLEX,
    field: FieldSpec | None = None,
    line: int = 1,
) -> RingContext:
    """Parse a descriptor like ``Q[x,y]``, ``F7[x,y,z]`` or ``GF(7)[x]``.

    A missing field prefix means ``field`` (rationals by default); an
    explicit ``field`` overrides the prefix.
    """
    mo = _RING_REGEX.match(text)
    if not mo:
        raise ParseError(f"malformed ring descriptor '{text.strip()}'", line, 1)
    names = [name.strip() for name in mo.group("vars").split(",")]
    if not names or any(not name for name in names):
        raise ParseError(f"empty variable name in '{text.strip()}'", line, mo.start("vars") + 1)
    if field is None:
        field = FieldSpec.parse(mo.group("field")) if mo.group("field") else FieldSpec()
    try:
        return RingContext(tuple(names), field, order)
    except ParseError as e:
        raise ParseError(e.reason, line, mo.start("vars") + 1) from e
    except PreconditionError as e:
        raise ParseError(e.message, line, 1) from e


SESSION_COMMANDS = (
    "coeffs",
    "hvector",
    "hilbert-values",
    "check-hhc",
    "check-powers",
    "hironaka",
    "curve-resolve",
    "delta",
)
CURVE_ONLY_COMMANDS = ("curve-resolve", "delta")


@dataclass(frozen=True)
class SessionCommand:
    """One command line of a session file."""

    name: str
    ideal: str | None
    line: int


@dataclass
class Session:
    """Declarations and commands of a session file.

    Attributes:
        ring: Declared ring, with modulus and dimension applied
        ideals: Named generator lists
        curve: Optional plane curve equation
        commands: Commands in file order
    """

    ring: RingContext | None = None
    ideals: dict[str, list[Polynomial]] = field(default_factory=dict)
    curve: Polynomial | None = None
    commands: list[SessionCommand] = field(default_factory=list)
    modulus_declared: bool = False


_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _split_statement(raw: str) -> tuple[str, str, int]:
    """Keyword, rest of the line and the rest's 1-based column."""
    text = raw.split("#", 1)[0].rstrip()
    stripped = text.lstrip()
    indent = len(text) - len(stripped)
    keyword, _, rest = stripped.partition(" ")
    column = indent + len(keyword) + 1 + (len(rest) - len(rest.lstrip())) + 1
    return keyword, rest.strip(), column


def parse_session(text: str, order: MonomialOrder = MonomialOrder.DEGREVLEX) -> Session:
    """Interpret a session file.

    Raises:
        ParseError: On malformed statements, with line and column
        UnknownIdentifierError: On use of an undeclared ideal or variable
    """
    session = Session()
    for number, raw in enumerate(text.splitlines(), start=1):
        keyword, rest, column = _split_statement(raw)
        if not keyword:
            continue

        if keyword == "ring":
            if session.ring is not None:
                raise ParseError("ring declared twice", number, 1)
            session.ring = parse_ring(rest, order, line=number)
            continue
        if session.ring is None:
            raise ParseError(f"'{keyword}' before the ring declaration", number, 1)

        if keyword == "mod":
            if session.modulus_declared:
                raise ParseError("modulus declared twice", number, 1)
            if session.ideals or session.curve is not None:
                raise ParseError("mod must precede ideal and curve declarations", number, 1)
            modulus = parse_polynomial(rest, session.ring.ambient, number, column)
            session.ring = session.ring.with_modulus(modulus)
            session.modulus_declared = True
        elif keyword == "dim":
            if not rest.isdigit():
                raise ParseError(f"dimension must be a natural number, got '{rest}'", number, column)
            session.ring = session.ring.with_dim(int(rest))
        elif keyword == "ideal":
            name, eq, body = rest.partition("=")
            name = name.strip()
            if not eq or not _IDENTIFIER.match(name):
                raise ParseError("expected 'ideal NAME = generators'", number, column)
            offset = raw.index("=") + 2 + (len(body) - len(body.lstrip()))
            session.ideals[name] = parse_generators(body.strip(), session.ring, number, offset)
        elif keyword == "curve":
            session.curve = parse_polynomial(rest, session.ring.ambient, number, column)
        elif keyword in SESSION_COMMANDS:
            session.commands.append(_session_command(session, keyword, rest, number, column))
        else:
            raise ParseError(f"unknown statement '{keyword}'", number, raw.index(keyword) + 1)

    if session.ring is None:
        raise ParseError("session declares no ring", 1, 1)
    logger.debug("session: %d ideals, %d commands", len(session.ideals), len(session.commands))
    return session


def _session_command(session: Session, name: str, rest: str, line: int, column: int) -> SessionCommand:
    if name in CURVE_ONLY_COMMANDS:
        if rest:
            raise ParseError(f"'{name}' takes no argument", line, column)
        if session.curve is None:
            raise UnknownIdentifierError(f"'{name}' needs a declared curve", line, 1)
        return SessionCommand(name, None, line)
    if not rest:
        raise ParseError(f"'{name}' needs an ideal name", line, column)
    if rest not in session.ideals:
        raise UnknownIdentifierError(f"undeclared ideal '{rest}'", line, column)
    if name == "hironaka" and session.curve is None:
        raise UnknownIdentifierError("'hironaka' needs a declared curve", line, 1)
    return SessionCommand(name, rest, line)


def load_session(path: Path | str, order: MonomialOrder = MonomialOrder.DEGREVLEX) -> Session:
    """Read and interpret a session file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise PreconditionError(f"cannot read session file {path}: {e}", path=str(path)) from e
    return parse_session(text, order)

