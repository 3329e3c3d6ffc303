"""Reduced Groebner bases and the quantities derived from them.

This module provides the Buchberger engine used for every length computation:

- Normal forms with a deterministic reducer choice
- Buchberger's algorithm with the normal selection strategy and the
  Gebauer-Moeller criteria, returning the canonical reduced basis
- Ideal membership
- Standard monomials and colength (vector-space dimension of the quotient)
- The check that an ideal is supported only at the origin
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum

from sympy.polys.rings import PolyElement, PolyRing

from src.algebra_core import Monomial, MonomialOrder, Polynomial, RingContext
from src.budget import ComputationBudget
from src.errors import PreconditionError, RingMismatchError, ZeroIdealError

logger = logging.getLogger(__name__)


class Infinite(Enum):
    """Marker for an infinite-dimensional quotient."""

    INFINITE = "infinite"

    def __str__(self) -> str:
        return self.value


INFINITE = Infinite.INFINITE


def spoly(f: PolyElement, g: PolyElement, lmf: Monomial, lmg: Monomial) -> PolyElement:
    """S-polynomial of monic f and g."""
    ring = f.ring
    lcm = ring.monomial_lcm(lmf, lmg)
    s1 = f.mul_monom(ring.monomial_div(lcm, lmf))
    s2 = g.mul_monom(ring.monomial_div(lcm, lmg))
    return s1 - s2


def select(ring: PolyRing, lms: list[Monomial], pairs: set[tuple[int, int]]) -> tuple[int, int]:
    """Pick the pair with the smallest lcm, ties broken by index."""

    def key(pair: tuple[int, int]) -> tuple:
        return (ring.order(ring.monomial_lcm(lms[pair[0]], lms[pair[1]])), pair)

    return min(pairs, key=key)


def update(
    ring: PolyRing,
    lms: list[Monomial],
    pairs: set[tuple[int, int]],
    lmf: Monomial,
) -> set[tuple[int, int]]:
    """New pair set after appending a polynomial with leading monomial ``lmf``.

    Applies the Gebauer-Moeller chain criterion to old pairs and the product
    criterion plus lcm minimalization to the new ones.
    """
    lcm = ring.monomial_lcm
    mul = ring.monomial_mul
    div = ring.monomial_div
    new_index = len(lms)

    kept = {
        (i, j)
        for i, j in pairs
        if (
            not div(lcm(lms[i], lms[j]), lmf)
            or lcm(lms[i], lms[j]) == lcm(lms[i], lmf)
            or lcm(lms[i], lms[j]) == lcm(lms[j], lmf)
        )
    }

    lcm_groups: dict[Monomial, list[int]] = {}
    for i, lm in enumerate(lms):
        lcm_groups.setdefault(lcm(lm, lmf), []).append(i)

    minimal: list[Monomial] = []
    for candidate in sorted(lcm_groups, key=ring.order):
        if all(not div(candidate, other) for other in minimal):
            minimal.append(candidate)

    added = set()
    for candidate in minimal:
        group = lcm_groups[candidate]
        if not any(lcm(lms[i], lmf) == mul(lms[i], lmf) for i in group):
            added.add((min(group), new_index))

    return kept | added


def minimalize(ring: PolyRing, basis: list[PolyElement]) -> list[PolyElement]:
    """Drop elements whose leading monomial is divisible by another's."""
    minimal: list[PolyElement] = []
    for f in sorted(basis, key=lambda h: ring.order(h.LM)):
        if all(not ring.monomial_div(f.LM, g.LM) for g in minimal):
            minimal.append(f)
    return minimal


def minimal_monomials(monomials: Iterator[Monomial] | Sequence[Monomial]) -> list[Monomial]:
    """Minimal generators of a monomial ideal.

    Candidates are visited by total degree, so each one is only tested
    against accepted monomials of strictly smaller degree.

    Args:
        monomials: Exponent tuples, duplicates allowed

    Returns:
        The monomials not divisible by another one, by degree then exponents
    """
    accepted: list[Monomial] = []
    smaller: list[Monomial] = []
    degree = -1
    for candidate in sorted(set(monomials), key=lambda m: (sum(m), m)):
        if sum(candidate) != degree:
            smaller = list(accepted)
            degree = sum(candidate)
        if not any(all(a <= b for a, b in zip(m, candidate)) for m in smaller):
            accepted.append(candidate)
    return accepted


def interreduce(basis: list[PolyElement]) -> list[PolyElement]:
    """Reduce each element of a minimal basis by the others and make it monic."""
    reduced = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1 :]
        reduced.append((g.rem(others) if others else g).monic())
    return reduced


@dataclass(frozen=True)
class GroebnerBasis:
    """Canonical reduced Groebner basis.

    Attributes:
        elements: Monic, interreduced, sorted by ascending leading monomial
        order: Monomial order the basis is reduced for
        ring: Ambient polynomial ring under ``order``
    """

    elements: tuple[Polynomial, ...]
    order: MonomialOrder
    ring: RingContext

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.elements)

    @property
    def leading_monomials(self) -> list[Monomial]:
        """Exponent tuples of the leading monomials, in basis order.

        Returns:
            One tuple per element; they generate the initial ideal
        """
        return [g.leading_monomial for g in self.elements]

    @property
    def is_unit(self) -> bool:
        """True when the ideal is the whole ring."""
        return any(sum(m) == 0 for m in self.leading_monomials)

    def reduce(self, p: Polynomial) -> Polynomial:
        """Normal form of ``p`` with respect to this basis."""
        return normal_form(p, list(self.elements), self.order)

    def contains(self, p: Polynomial) -> bool:
        """Ideal membership of ``p``.

        Args:
            p: Polynomial over the same variables and field

        Returns:
            True iff the normal form of ``p`` is zero
        """
        return ideal_member(p, self)


def _shared_context(polys: Sequence[Polynomial], order: MonomialOrder | None) -> RingContext:
    first = polys[0].ring
    for p in polys[1:]:
        if p.ring.variables != first.variables or p.ring.field != first.field:
            raise RingMismatchError(f"{first.describe()} and {p.ring.describe()} differ")
    return first.ambient.with_order(order or first.order)


def normal_form(
    p: Polynomial,
    basis: Sequence[Polynomial],
    order: MonomialOrder | None = None,
) -> Polynomial:
    """Fully reduce ``p`` by ``basis``.

    The largest reducible term is always reduced next, using the first
    listed basis element whose leading monomial divides it.

    Args:
        p: Polynomial to reduce
        basis: Reducers; zero entries are ignored
        order: Monomial order, defaults to the order of ``p``'s ring

    Returns:
        Remainder in ``p``'s ring

    Raises:
        RingMismatchError: If variables or fields differ
    """
    ctx = _shared_context([p, *basis], order)
    reducers = [g.in_context(ctx).element for g in basis if not g.is_zero]
    if not reducers or p.is_zero:
        return p
    remainder = p.in_context(ctx).element.rem(reducers)
    return Polynomial(p.ring, remainder)


def buchberger(
    gens: Sequence[Polynomial],
    order: MonomialOrder | None = None,
    budget: ComputationBudget | None = None,
) -> GroebnerBasis:
    """Canonical reduced Groebner basis of the ideal generated by ``gens``.

    Generators are read as polynomials of the ambient ring; a modulus of
    their context is not added.

    Args:
        gens: Nonempty generator list of one ring
        order: Monomial order, defaults to the generators' ring order
        budget: Optional size and time budget

    Returns:
        GroebnerBasis

    Raises:
        PreconditionError: If ``gens`` is empty
        ZeroIdealError: If every generator is zero
    """
    if not gens:
        raise PreconditionError("buchberger needs at least one generator")
    ctx = _shared_context(gens, order)
    budget = budget or ComputationBudget.unlimited()
    ring = ctx.poly_ring

    inputs = [g.in_context(ctx).element for g in gens if not g.is_zero]
    if not inputs:
        raise ZeroIdealError("the zero ideal has no Groebner basis to speak of")

    if all(len(f) == 1 for f in inputs):
        # monomial ideal: the minimal monomials are already the reduced basis
        budget.enforce(len(inputs))
        leads = minimal_monomials([f.LM for f in inputs])
        final = sorted((ring({m: ring.domain.one}) for m in leads), key=lambda g: ring.order(g.LM))
        logger.debug("monomial groebner basis: %d inputs, %d elements", len(inputs), len(final))
        return GroebnerBasis(tuple(Polynomial(ctx, g) for g in final), ctx.order, ctx)

    basis: list[PolyElement] = []
    lms: list[Monomial] = []
    pairs: set[tuple[int, int]] = set()

    def add(f: PolyElement) -> None:
        nonlocal pairs
        f = f.monic()
        pairs = update(ring, lms, pairs, f.LM)
        basis.append(f)
        lms.append(f.LM)

    for f in inputs:
        add(f)

    reductions = 0
    while pairs and not any(sum(lm) == 0 for lm in lms):
        budget.enforce(len(basis))
        i, j = select(ring, lms, pairs)
        pairs.remove((i, j))
        r = spoly(basis[i], basis[j], lms[i], lms[j]).rem(basis)
        reductions += 1
        if r:
            add(r)

    if any(sum(lm) == 0 for lm in lms):
        final = [ring.one]
    else:
        final = interreduce(minimalize(ring, basis))
    final.sort(key=lambda g: ring.order(g.LM))

    logger.debug(
        "groebner basis: %d inputs, %d reductions, %d elements", len(inputs), reductions, len(final)
    )
    return GroebnerBasis(tuple(Polynomial(ctx, g) for g in final), ctx.order, ctx)


def ideal_member(p: Polynomial, gb: GroebnerBasis) -> bool:
    """True iff ``p`` reduces to zero modulo ``gb``."""
    return normal_form(p, list(gb.elements), gb.order).is_zero


@dataclass(frozen=True)
class StandardMonomialSet:
    """Monomials outside the leading-monomial ideal of a zero-dimensional basis."""

    monomials: frozenset[Monomial]

    def __len__(self) -> int:
        return len(self.monomials)

    def __contains__(self, monomial: object) -> bool:
        return monomial in self.monomials

    def sorted(self, order: MonomialOrder) -> list[Monomial]:
        """Monomials in ascending order."""
        return sorted(self.monomials, key=order.key)


def _blocking_exponent(active: list[Monomial], k: int) -> int:
    """Least e with prefix + (e, 0, ..., 0) in the initial ideal.

    ``active`` holds the leads dividing the prefix in coordinates below k; the
    pure power of variable k is always among them.
    """
    return min(lead[k] for lead in active if not any(lead[k + 1 :]))


def _finite_staircase(gb: GroebnerBasis) -> bool:
    leads = gb.leading_monomials
    return all(
        any(lead[i] > 0 and sum(lead) == lead[i] for lead in leads) for i in range(gb.ring.arity)
    )


def standard_monomials(gb: GroebnerBasis) -> StandardMonomialSet | Infinite:
    """Standard monomials of a basis, or ``INFINITE``.

    The set is finite iff every variable has a pure power among the leading
    monomials.
    """
    if gb.is_unit:
        return StandardMonomialSet(frozenset())
    if not _finite_staircase(gb):
        return INFINITE

    n = gb.ring.arity
    found: set[Monomial] = set()

    def walk(prefix: Monomial, k: int, active: list[Monomial]) -> None:
        if k == n:
            found.add(prefix)
            return
        for exponent in range(_blocking_exponent(active, k)):
            walk((*prefix, exponent), k + 1, [lead for lead in active if lead[k] <= exponent])

    walk((), 0, gb.leading_monomials)
    return StandardMonomialSet(frozenset(found))


def _count_below(active: list[Monomial], k: int, n: int, budget: ComputationBudget) -> int:
    bound = _blocking_exponent(active, k)
    if k == n - 1:
        return bound
    if k == n - 2:
        # the last coordinate runs below the least last exponent of the leads seen so far
        ordered = sorted(active, key=lambda lead: lead[k])
        total = 0
        best = None
        pointer = 0
        for exponent in range(bound):
            while pointer < len(ordered) and ordered[pointer][k] <= exponent:
                last = ordered[pointer][k + 1]
                best = last if best is None else min(best, last)
                pointer += 1
            total += best
        return total
    budget.enforce(len(active))
    return sum(
        _count_below([lead for lead in active if lead[k] <= exponent], k + 1, n, budget)
        for exponent in range(bound)
    )


def standard_monomial_count(
    gb: GroebnerBasis, budget: ComputationBudget | None = None
) -> int | Infinite:
    """Number of standard monomials without listing them.

    Args:
        gb: Any Groebner basis
        budget: Optional time budget checked while counting

    Returns:
        The size of ``standard_monomials(gb)``, or ``INFINITE``
    """
    if gb.is_unit:
        return 0
    if not _finite_staircase(gb):
        return INFINITE
    return _count_below(gb.leading_monomials, 0, gb.ring.arity, budget or ComputationBudget.unlimited())


def _with_modulus(gens: Sequence[Polynomial], ring: RingContext) -> list[Polynomial]:
    lifted = [g.in_context(ring.ambient) for g in gens]
    if ring.modulus is not None:
        lifted.append(ring.modulus)
    return lifted


def quotient_basis(
    gens: Sequence[Polynomial],
    ring: RingContext,
    order: MonomialOrder | None = None,
    budget: ComputationBudget | None = None,
) -> GroebnerBasis | None:
    """Groebner basis of (gens) + (modulus), None for the zero ideal."""
    lifted = [g for g in _with_modulus(gens, ring) if not g.is_zero]
    if not lifted:
        return None
    return buchberger(lifted, order or ring.order, budget)


def colength(
    gens: Sequence[Polynomial],
    ring: RingContext,
    order: MonomialOrder | None = None,
    budget: ComputationBudget | None = None,
) -> int | Infinite:
    """Dimension of ring / (gens) as a vector space over the field.

    When the ring has a modulus f, the quotient by (gens) + (f) is measured.

    Returns:
        Non-negative integer, or ``INFINITE``
    """
    gb = quotient_basis(gens, ring, order, budget)
    if gb is None:
        return INFINITE
    return standard_monomial_count(gb, budget)


def supported_only_at_origin(
    gens: Sequence[Polynomial],
    ring: RingContext,
    budget: ComputationBudget | None = None,
) -> bool:
    """True iff some power of every variable lies in (gens) + (modulus).

    With finite colength N, such a power exists iff the (N+1)-th power does.
    The unit ideal passes vacuously.
    """
    gb = quotient_basis(gens, ring, budget=budget)
    if gb is None:
        return False
    count = standard_monomial_count(gb, budget)
    if count is INFINITE:
        return False
    bound = count + 1
    for i in range(ring.arity):
        exponents = tuple(bound if k == i else 0 for k in range(ring.arity))
        if not ideal_member(ring.ambient.monomial(exponents), gb):
            return False
    return True
