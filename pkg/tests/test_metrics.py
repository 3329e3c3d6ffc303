"""Tests for timing of engine operations."""

import time

from src.metrics import PerformanceTracker


class TestPerformanceTracker:
    """Tests for the performance tracker."""

    def test_track_records_time(self):
        """Should record a positive timing."""
        tracker = PerformanceTracker()
        with tracker.track("coeffs"):
            time.sleep(0.01)
        stats = tracker.get_stats("coeffs")
        assert stats["count"] == 1
        assert stats["total"] >= 5

    def test_track_records_on_error(self):
        """Should record even when the block raises."""
        tracker = PerformanceTracker()
        try:
            with tracker.track("delta"):
                raise ValueError("boom")
        except ValueError:
            pass
        assert tracker.get_stats("delta")["count"] == 1

    def test_unknown_operation(self):
        """Unknown operations should have empty statistics."""
        tracker = PerformanceTracker()
        assert tracker.get_stats("missing") == {"min": 0, "max": 0, "total": 0, "count": 0}

    def test_stats(self):
        """Statistics should summarize recorded values."""
        tracker = PerformanceTracker()
        for ms in (10.0, 20.0, 30.0):
            tracker.record("row", ms)
        assert tracker.get_stats("row") == {"min": 10.0, "max": 30.0, "total": 60.0, "count": 3}

    def test_report_uses_strings(self):
        """The report should hold strings only."""
        tracker = PerformanceTracker()
        tracker.record("pair", 1.5)
        tracker.record("pair", 2.0)
        assert tracker.to_report() == {
            "pair": {"count": "2", "total_ms": "3.500", "min_ms": "1.500", "max_ms": "2.000"}
        }

    def test_merge_keeps_first_seen_order(self):
        """Merged operations should follow the tracker's own."""
        tracker = PerformanceTracker()
        tracker.record("verify-paper", 5.0)
        rows = PerformanceTracker()
        rows.record("jacobian", 1.0)
        rows.record("pair", 2.0)
        rows.record("jacobian", 3.0)
        tracker.merge(rows)
        assert list(tracker.to_report()) == ["verify-paper", "jacobian", "pair"]
        assert tracker.get_stats("jacobian")["count"] == 2
