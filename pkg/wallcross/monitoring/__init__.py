"""
Monitoring for the wallcross engines.
Provides structured logging, counters and operation timing.
"""

from .metrics import MetricsCollector, metrics
from .logger import MonitoringLogger, PerformanceLogger, configure_logging
from .tracker import PerformanceTracker

# Shared tracker for the engines
tracker = PerformanceTracker()

__all__ = [
    'MetricsCollector',
    'MonitoringLogger',
    'PerformanceLogger',
    'PerformanceTracker',
    'configure_logging',
    'metrics',
    'tracker'
]
