"""Resource budgets for long-running algebra computations.

This module provides breakers at two levels:

- Size level: generator lists and Groebner bases growing too large
- Time level: wall clock limits (the CLI's ``--timeout-secs``)

A tripped breaker is turned into a ``ResourceCapExceeded`` subclass by
``ComputationBudget.enforce``.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import IntEnum

from src.errors import SizeBudgetExceeded, TimeBudgetExceeded

logger = logging.getLogger(__name__)


class BudgetLevel(IntEnum):
    """Levels of resource budgets."""

    SIZE = 1
    TIME = 2


class BudgetState(IntEnum):
    """State of a budget breaker."""

    CLOSED = 1  # Within budget
    OPEN = 2  # Exhausted


@dataclass
class BudgetCheckResult:
    """Result of a budget check."""

    level: BudgetLevel | None = None
    state: BudgetState = BudgetState.CLOSED
    reason: str = ""
    warnings: list[str] = field(default_factory=list)

    @property
    def is_ok(self) -> bool:
        """Check if the budget is fine and nothing is close to the limit."""
        return self.state == BudgetState.CLOSED and not self.warnings

    @property
    def is_tripped(self) -> bool:
        """Check if the budget is exhausted."""
        return self.state == BudgetState.OPEN

    @property
    def is_warning(self) -> bool:
        """Check if there are warnings."""
        return len(self.warnings) > 0 and self.state != BudgetState.OPEN


class SizeBudget:
    """Breaker for the number of polynomials held by one computation."""

    def __init__(self, max_elements: int | None = None, warning_pct: int = 70) -> None:
        """Initialize size budget.

        Args:
            max_elements: Maximum allowed element count, None for unlimited
            warning_pct: Percentage at which to warn
        """
        self.max_elements = max_elements
        self.warning_pct = warning_pct
        self.state = BudgetState.CLOSED

    def check(self, count: int) -> BudgetCheckResult:
        """Check an element count against the limit.

        Args:
            count: Current number of basis elements or generators

        Returns:
            BudgetCheckResult
        """
        if self.max_elements is None:
            return BudgetCheckResult(level=BudgetLevel.SIZE)

        if count >= self.max_elements:
            self.state = BudgetState.OPEN
            return BudgetCheckResult(
                level=BudgetLevel.SIZE,
                state=BudgetState.OPEN,
                reason=f"{count} elements reached the cap of {self.max_elements}",
            )

        pct = (count / self.max_elements) * 100
        if pct >= self.warning_pct:
            return BudgetCheckResult(
                level=BudgetLevel.SIZE,
                warnings=[f"{count} elements, {pct:.1f}% of the cap"],
            )

        return BudgetCheckResult(level=BudgetLevel.SIZE)


class TimeBudget:
    """Breaker for wall clock time."""

    def __init__(self, timeout_secs: float | None = None, warning_pct: int = 80) -> None:
        """Initialize time budget.

        Args:
            timeout_secs: Maximum allowed duration, None for unlimited
            warning_pct: Percentage of time at which to warn
        """
        self.timeout_secs = timeout_secs
        self.warning_pct = warning_pct
        self.start_time = time.monotonic()
        self.state = BudgetState.CLOSED

    def elapsed(self) -> float:
        """Seconds since the budget was started."""
        return time.monotonic() - self.start_time

    def check(self) -> BudgetCheckResult:
        """Check elapsed time against the limit.

        Returns:
            BudgetCheckResult
        """
        if self.timeout_secs is None:
            return BudgetCheckResult(level=BudgetLevel.TIME)

        elapsed = self.elapsed()
        if elapsed >= self.timeout_secs:
            self.state = BudgetState.OPEN
            return BudgetCheckResult(
                level=BudgetLevel.TIME,
                state=BudgetState.OPEN,
                reason=f"Time limit exceeded: {elapsed:.1f}s >= {self.timeout_secs}s",
            )

        pct = (elapsed / self.timeout_secs) * 100
        if pct >= self.warning_pct:
            return BudgetCheckResult(
                level=BudgetLevel.TIME,
                warnings=[f"Time {pct:.1f}% used, {self.timeout_secs - elapsed:.1f}s remaining"],
            )

        return BudgetCheckResult(level=BudgetLevel.TIME)


class ComputationBudget:
    """Combined size and time budget shared by one command."""

    def __init__(
        self,
        max_elements: int | None = None,
        timeout_secs: float | None = None,
    ) -> None:
        """Initialize the combined budget.

        Args:
            max_elements: Cap on basis or generator counts
            timeout_secs: Wall clock cap in seconds
        """
        self.size = SizeBudget(max_elements=max_elements)
        self.time = TimeBudget(timeout_secs=timeout_secs)
        self._warned = False

    @classmethod
    def unlimited(cls) -> "ComputationBudget":
        """Budget that never trips."""
        return cls()

    def check(self, count: int = 0) -> BudgetCheckResult:
        """Check both levels.

        Args:
            count: Current element count

        Returns:
            Combined BudgetCheckResult
        """
        all_warnings: list[str] = []

        size_result = self.size.check(count)
        if size_result.is_tripped:
            return size_result
        all_warnings.extend(size_result.warnings)

        time_result = self.time.check()
        if time_result.is_tripped:
            return time_result
        all_warnings.extend(time_result.warnings)

        return BudgetCheckResult(level=None, warnings=all_warnings)

    def enforce(self, count: int = 0) -> None:
        """Raise when either level is exhausted.

        Args:
            count: Current element count

        Raises:
            SizeBudgetExceeded: If the element cap was reached
            TimeBudgetExceeded: If the timeout elapsed
        """
        result = self.check(count)
        if result.is_tripped:
            if result.level == BudgetLevel.SIZE:
                raise SizeBudgetExceeded(result.reason, count=count)
            raise TimeBudgetExceeded(result.reason, timeout_secs=self.time.timeout_secs)
        if result.is_warning and not self._warned:
            self._warned = True
            for warning in result.warnings:
                logger.warning("budget: %s", warning)
