"""Exact coefficients, monomials, orders, polynomials and ring contexts.

This module provides the value types every computation is built on:

- Field descriptors for the rationals and prime fields
- Monomial orders (lex, deglex, degrevlex) with declaration-order precedence
- Immutable polynomials over sympy's sparse ``PolyRing``
- Ring contexts with an optional hypersurface modulus and dimension
- Translation of points to the origin and order of vanishing
"""

import re
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import grevlex, grlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from src.errors import (
    ArityMismatchError,
    ParseError,
    PreconditionError,
    RingMismatchError,
    ZeroPolynomialError,
)

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_MAX_PRIME = 2**63


class MonomialOrder(Enum):
    """Monomial orders; the first declared variable is the largest."""

    LEX = "lex"
    DEGLEX = "deglex"
    DEGREVLEX = "degrevlex"

    @property
    def sympy_order(self) -> Any:
        """The matching sympy ordering callable."""
        return _SYMPY_ORDERS[self]

    def key(self, monomial: Monomial) -> tuple:
        """Sort key; larger keys are larger monomials."""
        return self.sympy_order(monomial)

    @classmethod
    def from_name(cls, name: str) -> "MonomialOrder":
        """Look up an order by name (also accepts grlex/grevlex).

        Raises:
            PreconditionError: If the name is unknown
        """
        normalized = {"grlex": "deglex", "grevlex": "degrevlex"}.get(name.lower(), name.lower())
        try:
            return cls(normalized)
        except ValueError as e:
            raise PreconditionError(f"unknown monomial order '{name}'", order=name) from e


_SYMPY_ORDERS = {
    MonomialOrder.LEX: lex,
    MonomialOrder.DEGLEX: grlex,
    MonomialOrder.DEGREVLEX: grevlex,
}


class ArithOp(Enum):
    """Ring operations accepted by ``poly_arith``."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"


@lru_cache(maxsize=None)
def _prime_field(p: int) -> Any:
    return GF(p)


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (characteristic 0) or F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p != 0 and (p < 2 or p >= _MAX_PRIME or not isprime(p)):
            raise PreconditionError(f"F_{p} is not a prime field of word size", characteristic=p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        """The field of rational numbers."""
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        """The prime field F_p."""
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``q``/``Q``/``QQ`` or ``fp:<p>``/``F<p>``/``GF(<p>)``.

        Raises:
            ParseError: If the descriptor is malformed
        """
        t = text.strip().lower()
        if t in ("q", "qq"):
            return cls.rationals()
        match = re.fullmatch(r"(?:fp:|f|gf\()(\d+)\)?", t)
        if match is None or (t.startswith("gf(") != t.endswith(")")):
            raise ParseError(f"unknown field '{text}'")
        return cls.prime(int(match.group(1)))

    @property
    def is_rational(self) -> bool:
        """True for the rationals."""
        return self.characteristic == 0

    @property
    def domain(self) -> Any:
        """The sympy ground domain."""
        return QQ if self.is_rational else _prime_field(self.characteristic)

    @property
    def name(self) -> str:
        """Short name, ``Q`` or ``F<p>``."""
        return "Q" if self.is_rational else f"F{self.characteristic}"

    def coerce(self, value: Any) -> Any:
        """Convert an int, Fraction, decimal string or domain element.

        Raises:
            PreconditionError: If the denominator vanishes in F_p
        """
        if isinstance(value, PolyElement):
            raise PreconditionError("expected a scalar, got a polynomial")
        if not isinstance(value, (int, Fraction, str)):
            return self.domain.convert(value)
        q = Fraction(value)
        if self.is_rational:
            return QQ(q.numerator, q.denominator)
        p = self.characteristic
        if q.denominator % p == 0:
            raise PreconditionError(f"denominator {q.denominator} vanishes in {self.name}")
        return self.domain(q.numerator * pow(q.denominator, -1, p) % p)

    def to_fraction(self, coefficient: Any) -> Fraction:
        """Canonical value of a domain element; residues lie in [0, p)."""
        if self.is_rational:
            return Fraction(int(coefficient.numerator), int(coefficient.denominator))
        return Fraction(int(coefficient) % self.characteristic)


@lru_cache(maxsize=None)
def _build_ring(variables: tuple[str, ...], field: FieldSpec, order: MonomialOrder) -> PolyRing:
    return PolyRing(variables, field.domain, order.sympy_order)


def compare_monomials(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """Compare two exponent vectors.

    Args:
        m1: First monomial
        m2: Second monomial
        order: Monomial order

    Returns:
        1 if m1 > m2, -1 if m1 < m2, 0 if equal

    Raises:
        ArityMismatchError: If the vectors differ in length
    """
    if len(m1) != len(m2):
        raise ArityMismatchError(f"monomials of arity {len(m1)} and {len(m2)}")
    k1, k2 = order.key(tuple(m1)), order.key(tuple(m2))
    return (k1 > k2) - (k1 < k2)


def monomial_divides(m1: Monomial, m2: Monomial) -> bool:
    """True if m1 divides m2."""
    return all(a <= b for a, b in zip(m1, m2))


@dataclass(frozen=True)
class RingContext:
    """A polynomial ring, optionally modulo one hypersurface equation.

    Attributes:
        variables: Variable names in precedence order
        field: Coefficient field
        order: Monomial order used for leading terms
        modulus: Optional polynomial f of the ambient ring, f(0) = 0
        declared_dim: Expected Krull dimension, if declared
    """

    variables: tuple[str, ...]
    field: FieldSpec = FieldSpec()
    order: MonomialOrder = MonomialOrder.DEGREVLEX
    modulus: "Polynomial | None" = None
    declared_dim: int | None = None

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        if not variables:
            raise PreconditionError("a ring needs at least one variable")
        for name in variables:
            if not _IDENTIFIER.match(name):
                raise ParseError(f"invalid variable name '{name}'")
        if len(set(variables)) != len(variables):
            raise PreconditionError(f"duplicate variable names in {variables}")
        if self.declared_dim is not None and self.declared_dim < 0:
            raise PreconditionError("declared dimension must be non-negative")
        if self.modulus is not None:
            modulus = self.modulus.in_context(self.ambient)
            if modulus.is_zero:
                raise ZeroPolynomialError("the modulus must be nonzero")
            if modulus.coefficient((0,) * len(variables)) != 0:
                raise PreconditionError(
                    "the modulus must vanish at the origin", modulus=modulus.to_text()
                )
            object.__setattr__(self, "modulus", modulus)

    @cached_property
    def poly_ring(self) -> PolyRing:
        """The sympy ring holding representatives."""
        return _build_ring(self.variables, self.field, self.order)

    @cached_property
    def ambient(self) -> "RingContext":
        """The same polynomial ring without modulus or declared dimension."""
        if self.modulus is None and self.declared_dim is None:
            return self
        return RingContext(self.variables, self.field, self.order)

    @property
    def arity(self) -> int:
        """Number of variables."""
        return len(self.variables)

    @property
    def dimension(self) -> int:
        """Declared dimension, else v for a polynomial ring and v - 1 for a hypersurface."""
        if self.declared_dim is not None:
            return self.declared_dim
        return self.arity - 1 if self.modulus is not None else self.arity

    @property
    def modulus_element(self) -> PolyElement | None:
        """The modulus as an element of ``poly_ring``."""
        return None if self.modulus is None else self.modulus.element

    def with_order(self, order: MonomialOrder) -> "RingContext":
        """Same ring under another monomial order."""
        if order == self.order:
            return self
        return replace(self, order=order)

    def with_modulus(self, modulus: "Polynomial | None") -> "RingContext":
        """Same variables and field modulo ``modulus``."""
        return replace(self, modulus=modulus)

    def with_dim(self, dim: int | None) -> "RingContext":
        """Same ring with a declared dimension."""
        return replace(self, declared_dim=dim)

    def describe(self) -> str:
        """Human readable descriptor such as ``Q[x,y]/(y^2 - x^8)``."""
        text = f"{self.field.name}[{','.join(self.variables)}]"
        if self.modulus is not None:
            text += f"/({self.modulus.to_text()})"
        return text

    def index(self, name: str) -> int:
        """Position of a variable.

        Raises:
            PreconditionError: If the variable is not in the ring
        """
        try:
            return self.variables.index(name)
        except ValueError as e:
            raise PreconditionError(f"unknown variable '{name}'", variable=name) from e

    def wrap(self, element: PolyElement) -> "Polynomial":
        """Wrap a sympy element of ``poly_ring``."""
        return Polynomial(self, element)

    def zero(self) -> "Polynomial":
        """The zero polynomial of this context.

        Returns:
            Polynomial with no terms
        """
        return Polynomial(self, self.poly_ring.zero)

    def one(self) -> "Polynomial":
        """The constant 1 of this context.

        Returns:
            Polynomial with the single term 1
        """
        return Polynomial(self, self.poly_ring.one)

    def constant(self, value: Any) -> "Polynomial":
        """Constant polynomial."""
        return self.monomial((0,) * self.arity, value)

    def variable(self, name: str) -> "Polynomial":
        """The generator named ``name``."""
        return Polynomial(self, self.poly_ring.gens[self.index(name)])

    @property
    def gens(self) -> tuple["Polynomial", ...]:
        """All generators in declaration order."""
        return tuple(Polynomial(self, g) for g in self.poly_ring.gens)

    def monomial(self, exponents: Monomial, coefficient: Any = 1) -> "Polynomial":
        """A single term.

        Raises:
            ArityMismatchError: If the exponent vector has the wrong length
        """
        if len(exponents) != self.arity:
            raise ArityMismatchError(f"monomial of arity {len(exponents)} in a ring of arity {self.arity}")
        if any(e < 0 for e in exponents):
            raise PreconditionError("exponents must be non-negative")
        return self.from_terms({tuple(exponents): coefficient})

    def from_terms(self, terms: dict[Monomial, Any]) -> "Polynomial":
        """Build a polynomial from a monomial -> coefficient mapping."""
        element = self.poly_ring.zero.copy()
        for monomial, coefficient in terms.items():
            if len(monomial) != self.arity:
                raise ArityMismatchError(f"monomial {monomial} in a ring of arity {self.arity}")
            c = element.get(tuple(monomial), self.field.domain.zero) + self.field.coerce(coefficient)
            if c:
                element[tuple(monomial)] = c
            else:
                element.pop(tuple(monomial), None)
        return Polynomial(self, element)

    def maximal_ideal_generators(self, degree: int = 1) -> list["Polynomial"]:
        """All monomials of total degree ``degree``, largest first."""
        monomials = list(_compositions(degree, self.arity))
        monomials.sort(key=self.order.key, reverse=True)
        return [self.monomial(m) for m in monomials]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


class Polynomial:
    """Immutable polynomial in a ring context.

    The wrapped sympy element is never mutated after construction.
    """

    __slots__ = ("ring", "_element")

    def __init__(self, ring: RingContext, element: PolyElement) -> None:
        if element.ring != ring.poly_ring:
            if element.ring.symbols != ring.poly_ring.symbols or element.ring.domain != ring.poly_ring.domain:
                raise RingMismatchError(f"element of {element.ring} does not live in {ring.describe()}")
            element = element.set_ring(ring.poly_ring)
        self.ring = ring
        self._element = element

    @property
    def element(self) -> PolyElement:
        """The underlying sympy element; callers must not mutate it."""
        return self._element

    @property
    def is_zero(self) -> bool:
        return not self._element

    def terms(self) -> dict[Monomial, Any]:
        """Copy of the monomial -> coefficient mapping."""
        return dict(self._element)

    def sorted_terms(self) -> list[tuple[Monomial, Any]]:
        """Terms from largest to smallest in the ring order."""
        return self._element.terms()

    def monomials(self) -> list[Monomial]:
        """Exponent tuples of the terms.

        Returns:
            Monomials from largest to smallest in the ring order
        """
        return [m for m, _ in self.sorted_terms()]

    def coefficient(self, monomial: Monomial) -> Fraction:
        """Canonical coefficient of a monomial (0 when absent)."""
        c = self._element.get(tuple(monomial))
        return Fraction(0) if c is None else self.ring.field.to_fraction(c)

    @property
    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(m) for m in self._element), default=-1)

    @property
    def leading_monomial(self) -> Monomial:
        """Largest monomial in the ring order.

        Raises:
            ZeroPolynomialError: For the zero polynomial
        """
        if self.is_zero:
            raise ZeroPolynomialError("the zero polynomial has no leading monomial")
        return self._element.LM

    @property
    def leading_coefficient(self) -> Fraction:
        """Coefficient of the leading monomial."""
        if self.is_zero:
            raise ZeroPolynomialError("the zero polynomial has no leading coefficient")
        return self.ring.field.to_fraction(self._element.LC)

    def monic(self) -> "Polynomial":
        """Scale so the leading coefficient is 1."""
        if self.is_zero:
            raise ZeroPolynomialError("cannot normalize the zero polynomial")
        return Polynomial(self.ring, self._element.monic())

    def in_context(self, ring: RingContext) -> "Polynomial":
        """Reinterpret in a context with the same variables and field.

        Raises:
            RingMismatchError: If variables or field differ
        """
        if ring == self.ring:
            return self
        if ring.variables != self.ring.variables or ring.field != self.ring.field:
            raise RingMismatchError(
                f"cannot move a polynomial of {self.ring.describe()} into {ring.describe()}"
            )
        return Polynomial(ring, self._element)

    def diff(self, name: str) -> "Polynomial":
        """Partial derivative with respect to a variable."""
        index = self.ring.index(name)
        return Polynomial(self.ring, self._element.diff(self.ring.poly_ring.gens[index]))

    def _operand(self, other: Any) -> PolyElement | None:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"{self.ring.describe()} and {other.ring.describe()} differ"
                )
            return other._element
        if isinstance(other, (int, Fraction)):
            return self.ring.poly_ring.ground_new(self.ring.field.coerce(other))
        return None

    def __add__(self, other: Any) -> "Polynomial":
        q = self._operand(other)
        if q is None:
            return NotImplemented
        return Polynomial(self.ring, self._element + q)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Polynomial":
        q = self._operand(other)
        if q is None:
            return NotImplemented
        return Polynomial(self.ring, self._element - q)

    def __rsub__(self, other: Any) -> "Polynomial":
        q = self._operand(other)
        if q is None:
            return NotImplemented
        return Polynomial(self.ring, q - self._element)

    def __mul__(self, other: Any) -> "Polynomial":
        q = self._operand(other)
        if q is None:
            return NotImplemented
        return Polynomial(self.ring, self._element * q)

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, -self._element)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise PreconditionError("negative powers are not polynomials")
        return Polynomial(self.ring, self._element**k)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and dict.__eq__(self._element, other._element)
        if isinstance(other, (int, Fraction)):
            return self._element == self.ring.field.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self._element.items())))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r}, {self.ring.describe()!r})"

    def to_text(self) -> str:
        """Canonical text, terms from largest to smallest."""
        return to_text(self)


def poly_arith(p: Polynomial, q: Polynomial, op: ArithOp | str) -> Polynomial:
    """Add, subtract or multiply two polynomials of one ring.

    Raises:
        RingMismatchError: If the contexts differ
    """
    op = ArithOp(op)
    if p.ring != q.ring:
        raise RingMismatchError(f"{p.ring.describe()} and {q.ring.describe()} differ")
    if op == ArithOp.ADD:
        return p + q
    if op == ArithOp.SUB:
        return p - q
    return p * q


def translate(p: Polynomial, point: tuple[Scalar, ...] | list[Scalar]) -> Polynomial:
    """Return q with q(x) = p(x + point).

    Raises:
        ArityMismatchError: If the point has the wrong length
    """
    ring = p.ring
    if len(point) != ring.arity:
        raise ArityMismatchError(f"point of length {len(point)} in a ring of arity {ring.arity}")
    if all(Fraction(c) == 0 for c in point):
        return p
    gens = ring.poly_ring.gens
    replacements = [(g, g + ring.field.coerce(c)) for g, c in zip(gens, point) if Fraction(c) != 0]
    return Polynomial(ring, p.element.compose(replacements))


def order_of_vanishing(p: Polynomial) -> int:
    """Multiplicity at the origin: the least total degree of a term.

    Raises:
        ZeroPolynomialError: For the zero polynomial
    """
    if p.is_zero:
        raise ZeroPolynomialError("the zero polynomial vanishes to infinite order")
    return min(sum(m) for m in p.element)


def lowest_form(p: Polynomial) -> Polynomial:
    """Homogeneous part of least degree (the tangent cone equation)."""
    m = order_of_vanishing(p)
    return p.ring.from_terms({mon: c for mon, c in p.element.items() if sum(mon) == m})


def format_coefficient(value: Fraction) -> str:
    """Decimal text ``n`` or ``n/d``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_monomial(monomial: Monomial, variables: tuple[str, ...]) -> str:
    """Text like ``x^2*y``; empty for the unit monomial."""
    factors = []
    for name, e in zip(variables, monomial):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def to_text(p: Polynomial) -> str:
    """Canonical text of a polynomial, readable by the expression parser."""
    if p.is_zero:
        return "0"
    pieces: list[str] = []
    for monomial, c in p.sorted_terms():
        value = p.ring.field.to_fraction(c)
        negative = value < 0
        magnitude = -value if negative else value
        body = format_monomial(monomial, p.ring.variables)
        if not body:
            term = format_coefficient(magnitude)
        elif magnitude == 1:
            term = body
        else:
            term = f"{format_coefficient(magnitude)}*{body}"
        if not pieces:
            pieces.append(f"-{term}" if negative else term)
        else:
            pieces.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(pieces)
