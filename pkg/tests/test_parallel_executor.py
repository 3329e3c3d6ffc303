"""Tests for parallel execution of independent computations."""

import pytest

from src.errors import NotPrimaryError, PreconditionError
from src.parallel_executor import (
    ParallelExecutor,
    Task,
    TaskPriority,
    TaskStatus,
    WorkQueue,
)


def square(x: int) -> int:
    return x * x


def fail_on_three(x: int) -> int:
    if x == 3:
        raise NotPrimaryError(f"item {x}")
    return x


class TestTask:
    """Tests for tasks."""

    def test_default_status(self):
        """New tasks should be pending with normal priority."""
        task = Task("t1", "square", square, (2,))
        assert task.status == TaskStatus.PENDING
        assert task.priority == TaskPriority.NORMAL

    def test_priority_ordering(self):
        """Higher priority tasks should sort first."""
        low = Task("a", "square", square, priority=TaskPriority.LOW)
        high = Task("b", "square", square, priority=TaskPriority.HIGH)
        assert high < low

    def test_submission_order_breaks_ties(self):
        """Equal priorities should keep creation order."""
        first = Task("a", "square", square)
        second = Task("b", "square", square)
        assert first < second


class TestWorkQueue:
    """Tests for the priority queue."""

    def test_empty(self):
        """A new queue should be empty."""
        queue = WorkQueue()
        assert queue.dequeue() is None

    def test_priority_order(self):
        """Should dequeue by priority."""
        queue = WorkQueue()
        queue.enqueue(Task("low", "square", square, priority=TaskPriority.LOW))
        queue.enqueue(Task("critical", "square", square, priority=TaskPriority.CRITICAL))
        queue.enqueue(Task("normal", "square", square))
        assert [queue.dequeue().task_id for _ in range(3)] == ["critical", "normal", "low"]

    def test_enqueue_marks_queued(self):
        """Enqueued tasks should be marked queued."""
        queue = WorkQueue()
        task = Task("t", "square", square)
        queue.enqueue(task)
        assert task.status == TaskStatus.QUEUED


class TestParallelExecutor:
    """Tests for the executor."""

    def test_rejects_bad_settings(self):
        """Should reject zero workers and unknown backends."""
        with pytest.raises(PreconditionError):
            ParallelExecutor(workers=0)
        with pytest.raises(PreconditionError):
            ParallelExecutor(backend="gpu")

    def test_run_inline(self):
        """A single worker should run every task and keep submission order."""
        tasks = [
            Task("b", "square", square, (3,), priority=TaskPriority.LOW),
            Task("a", "square", square, (2,), priority=TaskPriority.HIGH),
        ]
        results = ParallelExecutor().run(tasks)
        assert list(results) == ["b", "a"]
        assert results["b"].value == 9
        assert results["a"].value == 4
        assert all(r.success for r in results.values())
        assert all(t.status == TaskStatus.COMPLETED for t in tasks)

    def test_run_threads(self):
        """A thread pool should return the same values in order."""
        tasks = [Task(str(i), "square", square, (i,)) for i in range(8)]
        results = ParallelExecutor(workers=4).run(tasks)
        assert [r.value for r in results.values()] == [i * i for i in range(8)]
        assert all(r.duration_ms is not None for r in results.values())

    def test_failures_recorded(self):
        """A failing task should be recorded, not raised."""
        results = ParallelExecutor().run([Task("bad", "fail", fail_on_three, (3,))])
        assert not results["bad"].success
        assert isinstance(results["bad"].error, NotPrimaryError)

    def test_duplicate_ids(self):
        """Duplicate task ids should be rejected."""
        with pytest.raises(PreconditionError):
            ParallelExecutor().run([Task("x", "square", square, (1,)), Task("x", "square", square, (2,))])

    def test_map_ordered(self):
        """map_ordered should align results with inputs."""
        assert ParallelExecutor(workers=3).map_ordered(square, [5, 1, 4]) == [25, 1, 16]

    def test_map_ordered_reraises_first_failure(self):
        """The first failure in input order should be re-raised."""
        with pytest.raises(NotPrimaryError, match="item 3"):
            ParallelExecutor(workers=2).map_ordered(fail_on_three, [1, 2, 3, 4])

    def test_process_backend(self):
        """A process pool should give the same results."""
        executor = ParallelExecutor(workers=2, backend="process")
        assert executor.map_ordered(square, [1, 2, 3]) == [1, 4, 9]
