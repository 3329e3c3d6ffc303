"""Timing of engine operations.

This module provides wall-clock tracking for commands and suite rows:

- Named timings recorded by a context manager
- Per-operation statistics
- A JSON-friendly summary for the report ``timing`` field
"""

import contextlib
import threading
import time
from collections.abc import Iterator


class PerformanceTracker:
    """Tracks performance metrics for operations."""

    def __init__(self) -> None:
        """Initialize performance tracker."""
        self._timings: dict[str, list[float]] = {}
        self._lock = threading.Lock()

    @contextlib.contextmanager
    def track(self, operation: str) -> Iterator[None]:
        """Context manager to track operation time.

        Args:
            operation: Name of operation

        Yields:
            None
        """
        start = time.perf_counter()
        try:
            yield
        finally:
            self.record(operation, (time.perf_counter() - start) * 1000)

    def record(self, operation: str, elapsed_ms: float) -> None:
        """Record a timing measured elsewhere.

        Args:
            operation: Name of operation
            elapsed_ms: Duration in milliseconds
        """
        with self._lock:
            self._timings.setdefault(operation, []).append(elapsed_ms)

    def merge(self, other: "PerformanceTracker") -> None:
        """Append every timing of another tracker.

        Args:
            other: Tracker whose operations are added after this one's
        """
        for operation, timings in other._timings.items():
            for elapsed_ms in timings:
                self.record(operation, elapsed_ms)

    def get_stats(self, operation: str) -> dict[str, float]:
        """Get timing statistics for operation.

        Args:
            operation: Name of operation

        Returns:
            Statistics dictionary
        """
        timings = self._timings.get(operation, [])
        if not timings:
            return {"min": 0, "max": 0, "total": 0, "count": 0}

        return {
            "min": min(timings),
            "max": max(timings),
            "total": sum(timings),
            "count": len(timings),
        }

    def to_report(self) -> dict[str, dict[str, str]]:
        """Summarize every operation with string values for JSON output.

        Returns:
            Mapping operation -> {"count", "total_ms", "min_ms", "max_ms"}
            in first-seen order
        """
        report = {}
        for operation in self._timings:
            stats = self.get_stats(operation)
            report[operation] = {
                "count": str(stats["count"]),
                "total_ms": f"{stats['total']:.3f}",
                "min_ms": f"{stats['min']:.3f}",
                "max_ms": f"{stats['max']:.3f}",
            }
        return report
