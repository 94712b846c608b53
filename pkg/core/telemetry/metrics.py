"""
Prometheus-compatible metrics for the bound solvers.

Metrics are bookkeeping only; no result ever depends on them.
"""
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from core.utils.logger import get_logger

logger = get_logger("SolverMetrics")

try:
    from prometheus_client import Counter, Gauge, Histogram, generate_latest

    PROMETHEUS_AVAILABLE = True
except ImportError:
    PROMETHEUS_AVAILABLE = False
    logger.warning("Prometheus client not installed. Keeping metrics in memory.")


class MetricType(Enum):
    COUNTER = "counter"
    GAUGE = "gauge"
    HISTOGRAM = "histogram"


@dataclass
class MetricConfig:
    name: str
    description: str
    metric_type: MetricType
    labels: List[str] = field(default_factory=list)
    buckets: Optional[List[float]] = None


SOLVER_METRICS = (
    MetricConfig("objective_evaluations_total", "Objective cells evaluated by the grid optimizer",
                 MetricType.COUNTER, ["operation"]),
    MetricConfig("operation_duration_seconds", "Wall time of a bound computation",
                 MetricType.HISTOGRAM, ["operation"], [0.001, 0.01, 0.1, 1.0, 10.0, 60.0, 300.0]),
    MetricConfig("lattice_cells_total", "Distribution-lattice cells evaluated",
                 MetricType.COUNTER, ["bound"]),
    MetricConfig("sweep_rows_total", "Sweep rows produced", MetricType.COUNTER, ["geometry"]),
    MetricConfig("worker_threads", "Worker threads of the evaluation pool", MetricType.GAUGE),
)

_PROMETHEUS_TYPES = {MetricType.COUNTER: Counter, MetricType.GAUGE: Gauge,
                     MetricType.HISTOGRAM: Histogram} if PROMETHEUS_AVAILABLE else {}


@dataclass
class _MemoryMetric:
    """Stand-in used when prometheus_client is missing."""
    config: MetricConfig
    values: Dict[Tuple, Any] = field(default_factory=dict)

    def update(self, labels: Dict[str, str], amount: float):
        key = tuple(sorted(labels.items()))
        kind = self.config.metric_type
        if kind is MetricType.COUNTER:
            self.values[key] = self.values.get(key, 0) + amount
        elif kind is MetricType.HISTOGRAM:
            self.values.setdefault(key, []).append(amount)
        else:
            self.values[key] = amount


class SolverMetrics:
    """
    Counts objective evaluations, lattice cells and sweep rows.

    Falls back to in-memory tables when prometheus_client is missing, so
    callers never need to check availability.
    """

    def __init__(self, prefix: str = "secmac_"):
        self.prefix = prefix
        self.metrics: Dict[str, Any] = {}
        self._lock = threading.RLock()
        for config in SOLVER_METRICS:
            self.metrics[prefix + config.name] = self._build(config)

    def _build(self, config: MetricConfig):
        if not PROMETHEUS_AVAILABLE:
            return _MemoryMetric(config)
        kwargs = {"buckets": config.buckets} if config.buckets else {}
        return _PROMETHEUS_TYPES[config.metric_type](
            self.prefix + config.name, config.description, config.labels, **kwargs
        )

    def _update(self, name: str, amount: float, labels: Optional[Dict[str, str]] = None):
        metric = self.metrics.get(self.prefix + name)
        if metric is None:
            return
        labels = labels or {}
        with self._lock:
            if not PROMETHEUS_AVAILABLE:
                metric.update(labels, amount)
                return
            target = metric.labels(**labels) if labels else metric
            if isinstance(metric, Counter):
                target.inc(amount)
            elif isinstance(metric, Histogram):
                target.observe(amount)
            else:
                target.set(amount)

    def record_evaluations(self, operation: str, count: int):
        self._update("objective_evaluations_total", count, {"operation": operation})

    def record_duration(self, operation: str, seconds: float):
        self._update("operation_duration_seconds", seconds, {"operation": operation})

    def record_lattice(self, bound: str, cells: int):
        self._update("lattice_cells_total", cells, {"bound": bound})

    def record_sweep_rows(self, geometry: str, rows: int):
        self._update("sweep_rows_total", rows, {"geometry": geometry})

    def set_worker_threads(self, count: int):
        self._update("worker_threads", count)

    def get_metrics_summary(self) -> Dict[str, Any]:
        """Metric names and types; recorded values too in fallback mode."""
        with self._lock:
            if PROMETHEUS_AVAILABLE:
                return {name: {"type": type(m).__name__.lower()} for name, m in self.metrics.items()}
            return {
                name: {"type": m.config.metric_type.value, "values": dict(m.values)}
                for name, m in self.metrics.items()
            }

    def export_prometheus(self) -> str:
        if not PROMETHEUS_AVAILABLE:
            return "# Prometheus client not available\n"
        return generate_latest().decode("utf-8")


metrics = SolverMetrics()
