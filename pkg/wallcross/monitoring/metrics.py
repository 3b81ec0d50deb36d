"""
Counters for engine activity: crossings, memo hits, invariance checks, retries.
"""

import threading
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Deque, Dict, List, Optional

CROSSINGS_EVALUATED = "euler.crossings_evaluated"
MEMO_HITS = "euler.memo_hits"
MEMO_MISSES = "euler.memo_misses"
INVARIANCE_CHECKS = "euler.invariance_checks_passed"
PATH_RETRIES = "paths.retries"
PATHS_PLANNED = "paths.planned"


@dataclass
class Metric:
    name: str
    value: float
    timestamp: float = field(default_factory=time.time)
    labels: Dict[str, str] = field(default_factory=dict)


class MetricsCollector:
    def __init__(self, max_history: int = 1000):
        self.metrics: Dict[str, Deque[Metric]] = {}
        self.counters: Dict[str, int] = {}
        self.max_history = max_history
        self._lock = threading.Lock()

    def record(self, name: str, value: float, **labels: Any) -> None:
        """Record a metric value."""
        metric = Metric(name=name, value=value, labels={k: str(v) for k, v in labels.items()})
        with self._lock:
            if name not in self.metrics:
                self.metrics[name] = deque(maxlen=self.max_history)
            self.metrics[name].append(metric)

    def increment(self, name: str, amount: int = 1) -> int:
        """Bump a counter and return its new value."""
        with self._lock:
            self.counters[name] = self.counters.get(name, 0) + amount
            return self.counters[name]

    def get_count(self, name: str) -> int:
        return self.counters.get(name, 0)

    def get_metric(self, name: str) -> List[Metric]:
        """Get all recorded values for a metric."""
        return list(self.metrics.get(name, []))

    def get_latest(self, name: str) -> Optional[Metric]:
        """Get the most recent value for a metric."""
        metrics = self.metrics.get(name, [])
        return metrics[-1] if metrics else None

    def snapshot(self) -> Dict[str, int]:
        with self._lock:
            return dict(self.counters)

    def reset(self) -> None:
        with self._lock:
            self.metrics.clear()
            self.counters.clear()


# Shared collector for the engines
metrics = MetricsCollector()
