"""
Tests for the monitoring components.
"""

import asyncio
import logging
import time
from io import StringIO

import pytest

from wallcross.monitoring.logger import MonitoringLogger, PerformanceLogger, configure_logging
from wallcross.monitoring.metrics import MetricsCollector
from wallcross.monitoring.tracker import PerformanceTracker


@pytest.fixture
def metrics_collector():
    return MetricsCollector(max_history=100)


@pytest.fixture
def monitoring_logger():
    return MonitoringLogger("wallcross.test")


@pytest.fixture
def performance_tracker():
    return PerformanceTracker(max_history=100)


class TestMetricsCollector:
    def test_record_metric(self, metrics_collector):
        """Test recording a metric."""
        metrics_collector.record("residue_degree", 42.0, label="test")
        metrics = metrics_collector.get_metric("residue_degree")

        assert len(metrics) == 1
        assert metrics[0].name == "residue_degree"
        assert metrics[0].value == 42.0
        assert metrics[0].labels == {"label": "test"}

    def test_get_latest_metric(self, metrics_collector):
        metrics_collector.record("residue_degree", 1.0)
        metrics_collector.record("residue_degree", 2.0)

        latest = metrics_collector.get_latest("residue_degree")
        assert latest is not None
        assert latest.value == 2.0
        assert metrics_collector.get_latest("absent") is None

    def test_history_is_bounded(self):
        collector = MetricsCollector(max_history=3)
        for value in range(5):
            collector.record("crossings", float(value))
        assert [m.value for m in collector.get_metric("crossings")] == [2.0, 3.0, 4.0]

    def test_counters(self, metrics_collector):
        assert metrics_collector.increment("euler.memo_hits") == 1
        assert metrics_collector.increment("euler.memo_hits", 4) == 5
        assert metrics_collector.get_count("euler.memo_hits") == 5
        assert metrics_collector.get_count("absent") == 0
        assert metrics_collector.snapshot() == {"euler.memo_hits": 5}

    def test_reset(self, metrics_collector):
        metrics_collector.increment("paths.planned")
        metrics_collector.record("residue_degree", 3.0)
        metrics_collector.reset()
        assert metrics_collector.snapshot() == {}
        assert metrics_collector.get_metric("residue_degree") == []


class TestMonitoringLogger:
    def test_log_levels(self, monitoring_logger):
        """Test different log levels."""
        event = monitoring_logger.info("test info")
        assert event.level == "INFO"
        assert event.message == "test info"

        event = monitoring_logger.error("test error")
        assert event.level == "ERROR"
        assert event.message == "test error"

    def test_context_logging(self, monitoring_logger):
        """Test logging with context."""
        event = monitoring_logger.info("Crossed wall", k=2, wall=[1])
        assert event.context == {"k": 2, "wall": [1]}

    def test_context_is_rendered_as_key_value(self, monitoring_logger, caplog):
        with caplog.at_level(logging.DEBUG, logger="wallcross.test"):
            monitoring_logger.debug("Planned path", crossings=1, attempts=2)
        assert "Planned path crossings=1 attempts=2" in caplog.text

    def test_performance_logger(self, caplog):
        perf = PerformanceLogger("wallcross.test.perf")
        assert perf.stop_timer("never_started") is None
        perf.start_timer("residue")
        with caplog.at_level(logging.INFO, logger="wallcross.test.perf"):
            duration = perf.stop_timer("residue", k=2)
        assert duration is not None and duration >= 0
        assert "Operation residue completed" in caplog.text


class TestConfigureLogging:
    def test_writes_to_stream(self):
        stream = StringIO()
        root = configure_logging("info", stream)
        assert root.level == logging.INFO
        logging.getLogger("wallcross.services").info("engine ready")
        assert "[INFO] wallcross.services: engine ready" in stream.getvalue()

    def test_replaces_its_own_handler(self):
        configure_logging("warning", StringIO())
        root = configure_logging("debug", StringIO())
        ours = [h for h in root.handlers if getattr(h, "_wallcross", False)]
        assert len(ours) == 1
        assert root.level == logging.DEBUG


class TestPerformanceTracker:
    def test_operation_timing(self, performance_tracker):
        """Test timing operations."""
        with performance_tracker.track("plan_path", k=2):
            time.sleep(0.05)
        metrics = performance_tracker.get_metrics("plan_path")

        assert len(metrics) == 1
        assert metrics[0].operation == "plan_path"
        assert metrics[0].duration >= 0.04
        assert metrics[0].context == {"k": "2"}

    def test_records_on_error(self, performance_tracker):
        with pytest.raises(ValueError):
            with performance_tracker.track("euler_class"):
                raise ValueError("boom")
        assert len(performance_tracker.get_metrics("euler_class")) == 1

    async def test_async_operation_timing(self, performance_tracker):
        """Test timing async operations."""
        async def slow_operation():
            await asyncio.sleep(0.05)
            return "done"

        result = await performance_tracker.track_async("async_op", slow_operation())

        assert result == "done"
        metrics = performance_tracker.get_metrics("async_op")
        assert len(metrics) == 1
        assert metrics[0].duration >= 0.04

    def test_sync_operation_timing(self, performance_tracker):
        assert performance_tracker.track_sync("sum", sum, [1, 2, 3]) == 6
        assert len(performance_tracker.get_metrics("sum")) == 1

    def test_performance_statistics(self, performance_tracker):
        """Test performance statistics calculations."""
        for duration in [0.1, 0.2, 0.3, 0.4, 0.5]:
            performance_tracker.record("euler_class", duration)

        avg_duration = performance_tracker.get_average_duration("euler_class")
        p95_duration = performance_tracker.get_percentile_duration("euler_class", 0.95)

        assert avg_duration == pytest.approx(0.3)
        assert p95_duration == 0.5
        assert performance_tracker.get_average_duration("absent") is None

    def test_clear(self, performance_tracker):
        performance_tracker.record("plan_path", 0.1)
        performance_tracker.clear()
        assert performance_tracker.get_metrics("plan_path") == []
