"""Hilbert-Samuel functions, polynomials and coefficients.

This module provides, with h(n) = length(R/I^(n+1)) throughout:

- Value tables h(0..nMax) from colengths of powers
- Stabilization detection and the binomial-basis fit for e_0..e_d
- The numerator a_0..a_s of sum h(n) Z^n = A(Z) / (1 - Z)^(d+1)
- The identity e_i = sum_{j >= i} C(j, i) a_j
- A driver that doubles nMax until the fit is accepted
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import partial
from typing import Any

from sympy import binomial

from src.budget import ComputationBudget
from src.config import EngineConfig
from src.errors import DimensionMismatchError, InvariantViolation, NotStabilizedError
from src.groebner import INFINITE
from src.ideals import Ideal, iter_powers
from src.parallel_executor import ParallelExecutor

logger = logging.getLogger(__name__)


def choose(top: int, k: int) -> int:
    """Binomial coefficient C(top, k) for any integer top; 0 for k < 0."""
    if k < 0:
        return 0
    return int(binomial(top, k))


def binomial_basis_value(e: Sequence[int], n: int) -> int:
    """Evaluate sum_i (-1)^i e_i C(n + d - i, d - i) at any integer n, d = len(e) - 1."""
    d = len(e) - 1
    return sum((-1) ** i * e[i] * choose(n + d - i, d - i) for i in range(d + 1))


def differences(values: Sequence[int], order: int) -> list[int]:
    """Forward difference row of the given order."""
    row = list(values)
    for _ in range(order):
        row = [b - a for a, b in zip(row, row[1:])]
    return row


@dataclass(frozen=True)
class HilbertFit:
    """Result of fitting a value table."""

    d: int
    n0: int
    e: tuple[int, ...]
    window: int


def _newton_value(values: Sequence[int], base: int, d: int, n: int) -> int:
    """Degree-d interpolant through values[base..base+d], evaluated at n."""
    row = list(values[base : base + d + 1])
    total = 0
    for k in range(d + 1):
        total += row[0] * choose(n - base, k)
        row = [b - a for a, b in zip(row, row[1:])]
    return total


def fit_hilbert_polynomial(
    values: Sequence[int],
    window: int | None = None,
    declared_dim: int | None = None,
    min_window: int = 3,
) -> HilbertFit:
    """Fit the Hilbert-Samuel polynomial to a value table.

    The degree d is one less than the order r of the first difference row
    whose trailing ``max(min_window, r + 1)`` entries all vanish. The
    coefficients come from the last d + 1 values and the polynomial must
    reproduce the whole trailing window.

    Args:
        values: h(0), ..., h(N)
        window: Trailing window width; defaults to max(min_window, d + 2)
        declared_dim: Expected degree, checked when given
        min_window: Smallest window accepted

    Returns:
        HilbertFit

    Raises:
        NotStabilizedError: If no difference row vanishes on its window
        DimensionMismatchError: If the inferred degree differs from ``declared_dim``
    """
    count = len(values)
    degree = None
    for r in range(1, count):
        width = max(min_window, r + 1, window or 0)
        row = differences(values, r)
        if width > len(row):
            break
        if all(x == 0 for x in row[len(row) - width :]):
            degree = r - 1
            break
    if degree is None:
        raise NotStabilizedError(
            f"no vanishing difference row among {count} values", values=list(values)
        )

    d = degree
    width = max(min_window, d + 2, window or 0)
    base = count - d - 1
    predicted = [_newton_value(values, base, d, n) for n in range(count)]
    if predicted[count - width :] != list(values[count - width :]):
        raise NotStabilizedError("fitted polynomial misses the trailing window", d=d)

    n0 = count - 1
    while n0 > 0 and predicted[n0 - 1] == values[n0 - 1]:
        n0 -= 1

    # e_i = (-1)^i (backward difference of order d - i of p) at -1
    at_negative = [_newton_value(values, base, d, -1 - k) for k in range(d + 1)]
    e = []
    for i in range(d + 1):
        j = d - i
        nabla = sum((-1) ** k * choose(j, k) * at_negative[k] for k in range(j + 1))
        e.append((-1) ** i * nabla)

    if declared_dim is not None and declared_dim != d:
        raise DimensionMismatchError(
            f"declared dimension {declared_dim} but the values have degree {d}",
            declared=declared_dim,
            inferred=d,
        )
    return HilbertFit(d=d, n0=n0, e=tuple(e), window=width)


def numerator_vector(values: Sequence[int], d: int) -> tuple[int, ...]:
    """Numerator coefficients a_0..a_s with a_s != 0.

    a_j = sum_{k=0}^{d+1} (-1)^k C(d+1, k) h(j - k), h(negative) = 0.

    Raises:
        NotStabilizedError: Unless the last d + 2 computed entries vanish
            and at least one entry precedes them
    """
    h = list(values)
    a = [
        sum((-1) ** k * choose(d + 1, k) * h[j - k] for k in range(d + 2) if j - k >= 0)
        for j in range(len(h))
    ]
    tail = a[len(a) - (d + 2) :] if len(a) >= d + 2 else a
    if len(a) < d + 3 or any(tail):
        raise NotStabilizedError(
            f"numerator has not vanished over the last {d + 2} of {len(a)} entries", d=d
        )
    s = max((j for j, x in enumerate(a) if x != 0), default=-1)
    if s < 0:
        raise NotStabilizedError("numerator is identically zero", d=d)
    return tuple(a[: s + 1])


def ev91_e_from_a(a: Sequence[int], d: int) -> tuple[int, ...]:
    """e_i = sum_{j >= i} C(j, i) a_j for i = 0..d."""
    return tuple(sum(choose(j, i) * a[j] for j in range(i, len(a))) for i in range(d + 1))


@dataclass(frozen=True)
class HilbertSamuelData:
    """Everything known about the Hilbert-Samuel function of one ideal.

    Attributes:
        values: h(0..N)
        d: Degree of the Hilbert-Samuel polynomial
        n0: Least n from which every computed value is polynomial
        e: e_0..e_d
        a: Numerator a_0..a_s
    """

    values: tuple[int, ...]
    d: int
    n0: int
    e: tuple[int, ...]
    a: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.a) - 1

    def polynomial(self, n: int) -> int:
        """p_I(n) for any integer n."""
        return binomial_basis_value(self.e, n)

    def verify(self) -> None:
        """Check every structural invariant.

        Raises:
            InvariantViolation: If any check fails
        """
        problems = []
        if self.e[0] < 1:
            problems.append(f"e_0 = {self.e[0]} < 1")
        for n in range(self.n0, len(self.values)):
            if self.polynomial(n) != self.values[n]:
                problems.append(f"p({n}) = {self.polynomial(n)} != h({n}) = {self.values[n]}")
        if not self.a or self.a[-1] == 0:
            problems.append("numerator has a zero leading entry")
        elif self.a[0] != self.values[0]:
            problems.append(f"a_0 = {self.a[0]} != h(0) = {self.values[0]}")
        if (-1) ** self.d * self.polynomial(-1) != self.e[self.d]:
            problems.append("e_d != (-1)^d p(-1)")
        if ev91_e_from_a(self.a, self.d) != self.e:
            problems.append(f"numerator gives e = {ev91_e_from_a(self.a, self.d)}, fit gives {self.e}")
        # h grows strictly until I^n stabilizes, which happens only in dimension zero
        if self.d > 0 and any(b <= a for a, b in zip(self.values, self.values[1:])):
            problems.append("values are not strictly increasing")
        elif any(b < a for a, b in zip(self.values, self.values[1:])):
            problems.append("values decrease")
        if problems:
            raise InvariantViolation("; ".join(problems), e=self.e, a=self.a)

    def to_dict(self) -> dict[str, Any]:
        """JSON-friendly form with decimal strings."""
        return {
            "d": str(self.d),
            "e": [str(x) for x in self.e],
            "a": [str(x) for x in self.a],
            "n0": str(self.n0),
            "values": [str(x) for x in self.values],
        }


def _power_colength(power: Ideal, budget: ComputationBudget | None = None) -> int:
    n = power.colength(budget)
    if n is INFINITE:
        raise InvariantViolation(f"power {power} of a primary ideal has infinite colength")
    return n


class HilbertFunction:
    """Incrementally computed value table of one m-primary ideal.

    Powers and colengths already computed are kept when the table grows.
    """

    def __init__(
        self,
        ideal: Ideal,
        executor: ParallelExecutor | None = None,
        budget: ComputationBudget | None = None,
    ) -> None:
        self.budget = budget or ComputationBudget.unlimited()
        ideal.require_m_primary(self.budget)
        self.ideal = ideal
        self.executor = executor or ParallelExecutor()
        self._powers = iter_powers(ideal, self.budget)
        self._values: list[int] = []

    def values(self, n_max: int) -> list[int]:
        """h(0..n_max)."""
        missing = n_max + 1 - len(self._values)
        if missing > 0:
            powers = [next(self._powers) for _ in range(missing)]
            measure = partial(_power_colength, budget=self.budget)
            self._values.extend(self.executor.map_ordered(measure, powers))
            self.budget.enforce()
            logger.debug("h(0..%d) = %s", n_max, self._values)
        return self._values[: n_max + 1]


def hs_values(
    ideal: Ideal,
    n_max: int,
    executor: ParallelExecutor | None = None,
    budget: ComputationBudget | None = None,
) -> list[int]:
    """h(n) = length(R/I^(n+1)) for n = 0..n_max.

    Raises:
        NotPrimaryError: If I is not primary to the maximal ideal
        ResourceCapExceeded: If the budget runs out
    """
    return HilbertFunction(ideal, executor, budget).values(n_max)


def e_coefficients(
    ideal: Ideal,
    config: EngineConfig | None = None,
    executor: ParallelExecutor | None = None,
    budget: ComputationBudget | None = None,
    function: HilbertFunction | None = None,
) -> HilbertSamuelData:
    """Compute and verify the full Hilbert-Samuel data of an m-primary ideal.

    nMax starts at 2d + 3 for the ring's expected dimension d and doubles
    up to ``config.max_power``.

    Raises:
        NotPrimaryError: If I is not primary to the maximal ideal
        NotStabilizedError: If the cap is reached first
        DimensionMismatchError: If two consecutive tables agree on a degree
            other than the ring's dimension
    """
    config = config or EngineConfig()
    executor = executor or ParallelExecutor(config.workers, config.backend)
    budget = budget or ComputationBudget(config.max_basis_size, config.timeout_secs)
    function = function or HilbertFunction(ideal, executor, budget)
    expected = ideal.ring.dimension

    last_error: Exception | None = None
    previous: HilbertFit | None = None
    for n_max in config.escalation.limits(expected):
        values = function.values(n_max)
        try:
            fit = fit_hilbert_polynomial(values, min_window=config.min_window)
        except NotStabilizedError as e:
            logger.debug("nMax=%d: %s", n_max, e.message)
            last_error, previous = e, None
            continue

        if fit.d != expected:
            last_error = DimensionMismatchError(
                f"ring dimension is {expected} but the Hilbert-Samuel polynomial has degree {fit.d}",
                declared=expected,
                inferred=fit.d,
            )
            if previous is not None and (previous.d, previous.e) == (fit.d, fit.e):
                raise last_error
            previous = fit
            continue

        try:
            a = numerator_vector(values, fit.d)
        except NotStabilizedError as e:
            logger.debug("nMax=%d: %s", n_max, e.message)
            last_error = e
            continue

        data = HilbertSamuelData(tuple(values), fit.d, fit.n0, fit.e, a)
        data.verify()
        logger.debug("stabilized at nMax=%d: e=%s a=%s", n_max, fit.e, a)
        return data

    if isinstance(last_error, DimensionMismatchError):
        raise last_error
    raise NotStabilizedError(
        f"Hilbert-Samuel function of {ideal} not stabilized by nMax={config.max_power}",
        cap=config.max_power,
    )
