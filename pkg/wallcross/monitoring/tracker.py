"""
Duration history for engine operations (euler_class, plan_path, vortex_invariant).
"""

import threading
import time
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Awaitable, Callable, Deque, Dict, Iterator, List, Optional, TypeVar

T = TypeVar("T")


@dataclass
class PerformanceMetric:
    operation: str
    duration: float
    timestamp: float = field(default_factory=time.time)
    context: Dict[str, str] = field(default_factory=dict)


class PerformanceTracker:
    def __init__(self, max_history: int = 1000):
        self.metrics: Dict[str, Deque[PerformanceMetric]] = {}
        self.max_history = max_history
        self._lock = threading.Lock()

    def record(self, operation: str, duration: float, **context: Any) -> PerformanceMetric:
        """Record a measured duration."""
        metric = PerformanceMetric(
            operation=operation,
            duration=duration,
            context={k: str(v) for k, v in context.items()},
        )
        with self._lock:
            if operation not in self.metrics:
                self.metrics[operation] = deque(maxlen=self.max_history)
            self.metrics[operation].append(metric)
        return metric

    @contextmanager
    def track(self, operation: str, **context: Any) -> Iterator[None]:
        """Time the body of a with-block; nesting the same operation is fine."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.record(operation, time.perf_counter() - start, **context)

    def get_metrics(self, operation: str) -> List[PerformanceMetric]:
        """Get all metrics for a specific operation."""
        return list(self.metrics.get(operation, []))

    def get_average_duration(self, operation: str) -> Optional[float]:
        """Get the average duration of an operation."""
        metrics = self.metrics.get(operation, [])
        if not metrics:
            return None
        return sum(m.duration for m in metrics) / len(metrics)

    def get_percentile_duration(self, operation: str, percentile: float) -> Optional[float]:
        """Get the duration at a specific percentile for an operation."""
        metrics = self.metrics.get(operation, [])
        if not metrics:
            return None
        sorted_durations = sorted(m.duration for m in metrics)
        index = min(int(len(sorted_durations) * percentile), len(sorted_durations) - 1)
        return sorted_durations[index]

    async def track_async(self, operation: str, coro: Awaitable[T], **context: Any) -> T:
        """Track the duration of an async operation."""
        with self.track(operation, **context):
            return await coro

    def track_sync(self, operation: str, func: Callable[..., T], *args: Any, **kwargs: Any) -> T:
        """Track the duration of a sync operation."""
        with self.track(operation):
            return func(*args, **kwargs)

    def clear(self) -> None:
        with self._lock:
            self.metrics.clear()
