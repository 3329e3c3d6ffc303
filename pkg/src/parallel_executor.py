"""Parallel execution of independent algebra computations.

This module runs independent jobs (per-n colengths, per-node multiplicities,
suite rows) over a worker pool:

- Task priority and status management
- Work queue with priority ordering
- Thread or process pools from ``concurrent.futures``
- Results always returned in submission order
"""

import heapq
import itertools
import logging
import time
from collections.abc import Callable, Iterable
from concurrent.futures import Executor, Future, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, TypeVar

from src.errors import PreconditionError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_sequence = itertools.count()


class TaskPriority(IntEnum):
    """Task priority levels."""

    CRITICAL = 1
    HIGH = 2
    NORMAL = 3
    LOW = 4


class TaskStatus(Enum):
    """Task status."""

    PENDING = "pending"
    QUEUED = "queued"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class Task:
    """A callable to be executed by the pool."""

    task_id: str
    name: str
    fn: Callable[..., Any]
    args: tuple[Any, ...] = ()
    priority: TaskPriority = TaskPriority.NORMAL
    status: TaskStatus = TaskStatus.PENDING
    sequence: int = field(default_factory=lambda: next(_sequence))

    def __lt__(self, other: "Task") -> bool:
        """Compare tasks by priority and submission order."""
        if self.priority.value != other.priority.value:
            return self.priority.value < other.priority.value
        return self.sequence < other.sequence


@dataclass
class WorkResult:
    """Result of task execution."""

    task_id: str
    success: bool
    value: Any = None
    error: BaseException | None = None
    duration_ms: float | None = None


class WorkQueue:
    """Priority queue for tasks."""

    def __init__(self) -> None:
        self._heap: list[Task] = []

    def enqueue(self, task: Task) -> None:
        """Add task to queue.

        Args:
            task: Task to add
        """
        task.status = TaskStatus.QUEUED
        heapq.heappush(self._heap, task)

    def dequeue(self) -> Task | None:
        """Remove and return highest priority task.

        Returns:
            Task or None if empty
        """
        if self._heap:
            return heapq.heappop(self._heap)
        return None


def _timed_call(fn: Callable[..., Any], args: tuple[Any, ...]) -> tuple[Any, float]:
    start = time.perf_counter()
    value = fn(*args)
    return value, (time.perf_counter() - start) * 1000


class ParallelExecutor:
    """Executes independent tasks on a worker pool."""

    def __init__(self, workers: int = 1, backend: str = "thread") -> None:
        """Initialize parallel executor.

        Args:
            workers: Pool size; 1 runs every task inline
            backend: ``thread`` or ``process``
        """
        if workers < 1:
            raise PreconditionError("workers must be positive", workers=workers)
        if backend not in ("thread", "process"):
            raise PreconditionError(f"unknown backend '{backend}'", backend=backend)
        self.workers = workers
        self.backend = backend

    def _pool(self) -> Executor:
        if self.backend == "process":
            return ProcessPoolExecutor(max_workers=self.workers)
        return ThreadPoolExecutor(max_workers=self.workers)

    def run(self, tasks: Iterable[Task]) -> dict[str, WorkResult]:
        """Run tasks, dispatching in priority order.

        Args:
            tasks: Tasks with unique ids

        Returns:
            Mapping task_id -> WorkResult, ordered by submission
        """
        submitted = list(tasks)
        ids = [task.task_id for task in submitted]
        if len(set(ids)) != len(ids):
            raise PreconditionError("duplicate task ids")

        queue = WorkQueue()
        for task in submitted:
            queue.enqueue(task)

        results: dict[str, WorkResult] = {}
        if self.workers == 1:
            while (task := queue.dequeue()) is not None:
                results[task.task_id] = self._run_inline(task)
        else:
            futures: dict[str, Future] = {}
            with self._pool() as pool:
                while (task := queue.dequeue()) is not None:
                    task.status = TaskStatus.IN_PROGRESS
                    futures[task.task_id] = pool.submit(_timed_call, task.fn, task.args)
                for task in submitted:
                    results[task.task_id] = self._collect(task, futures[task.task_id])

        logger.debug("ran %d tasks on %d %s workers", len(submitted), self.workers, self.backend)
        return {task_id: results[task_id] for task_id in ids}

    def _run_inline(self, task: Task) -> WorkResult:
        task.status = TaskStatus.IN_PROGRESS
        start = time.perf_counter()
        try:
            value = task.fn(*task.args)
        except Exception as e:
            task.status = TaskStatus.FAILED
            return WorkResult(task.task_id, False, error=e, duration_ms=(time.perf_counter() - start) * 1000)
        task.status = TaskStatus.COMPLETED
        return WorkResult(task.task_id, True, value=value, duration_ms=(time.perf_counter() - start) * 1000)

    @staticmethod
    def _collect(task: Task, future: Future) -> WorkResult:
        try:
            value, duration_ms = future.result()
        except Exception as e:
            task.status = TaskStatus.FAILED
            return WorkResult(task.task_id, False, error=e)
        task.status = TaskStatus.COMPLETED
        return WorkResult(task.task_id, True, value=value, duration_ms=duration_ms)

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Apply ``fn`` to every item and return values in input order.

        Args:
            fn: Function of one argument
            items: Inputs

        Returns:
            List of results aligned with ``items``

        Raises:
            Exception: The first failure in input order is re-raised
        """
        tasks = [
            Task(task_id=str(i), name=getattr(fn, "__name__", "task"), fn=fn, args=(item,))
            for i, item in enumerate(items)
        ]
        results = self.run(tasks)
        values = []
        for task in tasks:
            result = results[task.task_id]
            if not result.success:
                assert result.error is not None
                raise result.error
            values.append(result.value)
        return values
