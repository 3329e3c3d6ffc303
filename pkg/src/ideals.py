"""Ideals of a ring context and their derived lengths.

This module provides:

- The ``Ideal`` value (canonical generator list in one ring)
- Sums, products and membership
- Powers computed incrementally with pruning
- The minimal number of generators and length(I/I^2)
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from src.algebra_core import Monomial, Polynomial, RingContext, monomial_divides
from src.budget import ComputationBudget
from src.errors import InvariantViolation, NotPrimaryError, PreconditionError, RingMismatchError
from src.groebner import (
    INFINITE,
    GroebnerBasis,
    Infinite,
    colength,
    ideal_member,
    minimal_monomials,
    normal_form,
    quotient_basis,
    supported_only_at_origin,
)

logger = logging.getLogger(__name__)


def _sort_key(p: Polynomial) -> tuple:
    order = p.ring.order
    return tuple((order.key(m), p.ring.field.to_fraction(c)) for m, c in p.sorted_terms())


@dataclass(frozen=True)
class Ideal:
    """An ideal given by generators.

    Generators are monic, nonzero, deduplicated and sorted by their terms.
    """

    generators: tuple[Polynomial, ...]
    ring: RingContext

    def __post_init__(self) -> None:
        canonical: set[Polynomial] = set()
        for g in self.generators:
            if g.ring.variables != self.ring.variables or g.ring.field != self.ring.field:
                raise RingMismatchError(
                    f"generator {g} of {g.ring.describe()} is not in {self.ring.describe()}"
                )
            g = g.in_context(self.ring)
            if not g.is_zero:
                canonical.add(g.monic())
        object.__setattr__(self, "generators", tuple(sorted(canonical, key=_sort_key, reverse=True)))

    @classmethod
    def of(cls, ring: RingContext, polys: Sequence[Polynomial]) -> "Ideal":
        """Ideal of ``ring`` generated by ``polys``."""
        return cls(tuple(polys), ring)

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def is_zero(self) -> bool:
        """True when no nonzero generator is left."""
        return not self.generators

    def to_text(self) -> str:
        """Canonical generator text joined by commas, ``0`` for the zero ideal."""
        return ", ".join(g.to_text() for g in self.generators) if self.generators else "0"

    def __str__(self) -> str:
        return f"({self.to_text()})"

    def basis(self, budget: ComputationBudget | None = None) -> GroebnerBasis | None:
        """Groebner basis of the ideal plus the modulus (None for the zero ideal)."""
        return quotient_basis(self.generators, self.ring, budget=budget)

    def colength(self, budget: ComputationBudget | None = None) -> int | Infinite:
        """length(R/I)."""
        return colength(self.generators, self.ring, budget=budget)

    def is_m_primary(self, budget: ComputationBudget | None = None) -> bool:
        """True iff I is supported only at the origin (unit ideal included)."""
        return supported_only_at_origin(self.generators, self.ring, budget)

    def require_m_primary(self, budget: ComputationBudget | None = None) -> int:
        """Check the ideal is primary to the maximal ideal at the origin.

        Args:
            budget: Optional budget for the Groebner computations

        Returns:
            length(R/I)

        Raises:
            NotPrimaryError: If the ideal is the unit ideal or is not supported
                only at the origin
        """
        n = self.colength(budget)
        if n is INFINITE or not self.is_m_primary(budget):
            raise NotPrimaryError(f"{self} is not primary to the maximal ideal", ideal=self.to_text())
        if n == 0:
            raise NotPrimaryError(f"{self} is the unit ideal", ideal=self.to_text())
        return n

    def contains(self, p: Polynomial) -> bool:
        """Membership modulo the ring's modulus."""
        gb = self.basis()
        if gb is None:
            return p.is_zero
        return ideal_member(p, gb)

    def contains_ideal(self, other: "Ideal") -> bool:
        """True iff every generator of ``other`` lies in this ideal."""
        gb = self.basis()
        if gb is None:
            return other.is_zero
        return all(ideal_member(g, gb) for g in other.generators)

    def generates_same(self, other: "Ideal") -> bool:
        """Equality as ideals, whatever the generators."""
        return self.contains_ideal(other) and other.contains_ideal(self)

    def _check_ring(self, other: "Ideal") -> None:
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring.describe()} and {other.ring.describe()} differ")

    def sum(self, other: "Ideal") -> "Ideal":
        """I + J."""
        self._check_ring(other)
        return Ideal(self.generators + other.generators, self.ring)

    def product(self, other: "Ideal") -> "Ideal":
        """I * J from pairwise products of generators."""
        self._check_ring(other)
        return Ideal(tuple(a * b for a in self.generators for b in other.generators), self.ring)

    def power(self, k: int, budget: ComputationBudget | None = None) -> "Ideal":
        """I^k, see ``ideal_power``."""
        return ideal_power(self, k, budget)


def maximal_ideal(ring: RingContext) -> Ideal:
    """The ideal generated by all variables."""
    return Ideal(ring.gens, ring)


def maximal_ideal_power(ring: RingContext, k: int) -> Ideal:
    """m^k from the monomials of degree k."""
    if k < 1:
        raise PreconditionError("power must be positive", k=k)
    return Ideal(tuple(ring.maximal_ideal_generators(k)), ring)


def _is_monomial(p: Polynomial) -> bool:
    return len(p.element) == 1


def _pruned_product(
    current: Sequence[Polynomial],
    base: Sequence[Polynomial],
    ring: RingContext,
    budget: ComputationBudget,
) -> list[Polynomial]:
    if all(_is_monomial(p) for p in (*current, *base)):
        exponents = {
            tuple(a + b for a, b in zip(p.leading_monomial, q.leading_monomial))
            for p in current
            for q in base
        }
        minimal = minimal_monomials(exponents)
        budget.enforce(len(minimal))
        return [ring.monomial(m) for m in minimal]

    products: set[Polynomial] = set()
    for a in current:
        for b in base:
            products.add((a * b).monic())

    modulus = [ring.modulus] if ring.modulus is not None else []
    accepted: list[Polynomial] = []
    accepted_monomials: list[Monomial] = []
    for product in sorted(products, key=_sort_key):
        lifted = product.in_context(ring.ambient)
        if _is_monomial(lifted) and any(
            monomial_divides(m, lifted.leading_monomial) for m in accepted_monomials
        ):
            continue
        if normal_form(lifted, accepted + modulus).is_zero:
            continue
        accepted.append(lifted)
        if _is_monomial(lifted):
            accepted_monomials.append(lifted.leading_monomial)
        budget.enforce(len(accepted))
    return [p.in_context(ring) for p in accepted]


def iter_powers(ideal: Ideal, budget: ComputationBudget | None = None) -> Iterator[Ideal]:
    """Yield I, I^2, I^3, ... using I^(j+1) = I^j * I with pruning.

    Products of monomials are pruned by divisibility alone. Other products
    whose normal form against the products already accepted (plus the
    modulus) is zero are dropped.
    """
    budget = budget or ComputationBudget.unlimited()
    base = list(ideal.generators)
    current = base
    k = 1
    yield ideal
    while True:
        k += 1
        current = _pruned_product(current, base, ideal.ring, budget)
        logger.debug("power %d of %s: %d generators", k, ideal, len(current))
        yield Ideal(tuple(current), ideal.ring)


def ideal_power(ideal: Ideal, k: int, budget: ComputationBudget | None = None) -> Ideal:
    """Generators of I^k.

    Raises:
        PreconditionError: If k < 1
    """
    if k < 1:
        raise PreconditionError("power must be positive", k=k)
    for j, power in enumerate(iter_powers(ideal, budget), start=1):
        if j == k:
            return power
    raise AssertionError("unreachable")


def minimal_generator_count(ideal: Ideal, budget: ComputationBudget | None = None) -> int:
    """mu(I) = length(R/mI) - length(R/I).

    Args:
        ideal: An m-primary ideal
        budget: Optional budget shared with the caller

    Raises:
        NotPrimaryError: If I is not primary to the maximal ideal
    """
    base = ideal.require_m_primary(budget)
    m_times_i = ideal.product(maximal_ideal(ideal.ring))
    count = m_times_i.colength(budget)
    assert count is not INFINITE
    mu = count - base
    if mu < 1 or mu > len(ideal.generators):
        raise InvariantViolation(
            f"minimal generator count {mu} outside [1, {len(ideal.generators)}]",
            ideal=ideal.to_text(),
        )
    return mu


def length_I_mod_I2(ideal: Ideal, budget: ComputationBudget | None = None) -> int:  # noqa: N802
    """length(I/I^2) = length(R/I^2) - length(R/I).

    Raises:
        NotPrimaryError: If I is not primary to the maximal ideal
    """
    base = ideal.require_m_primary(budget)
    square = ideal_power(ideal, 2, budget).colength(budget)
    assert square is not INFINITE
    return square - base
