"""
Thread pool used for embarrassingly parallel evaluations (sweep rows,
distribution-lattice chunks).
"""
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

from core.config import settings
from core.telemetry.metrics import metrics
from core.utils.logger import get_logger

logger = get_logger("EvaluationPool")

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(requested: Optional[int] = None) -> int:
    """0 means one worker per CPU."""
    count = settings.THREADS if requested is None else requested
    if count < 0:
        raise ValueError(f"worker count must be >= 0, got {count}")
    if count == 0:
        count = os.cpu_count() or 1
    return count


class EvaluationPool:
    """
    Ordered map over a ThreadPoolExecutor.

    Results always come back in input order, so every reduction downstream is
    independent of the schedule.
    """

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = resolve_workers(max_workers)
        self._lock = threading.RLock()
        self._executor: Optional[ThreadPoolExecutor] = None

    def __enter__(self) -> "EvaluationPool":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.stop()

    def start(self):
        with self._lock:
            if self._executor is None and self.max_workers > 1:
                self._executor = ThreadPoolExecutor(max_workers=self.max_workers,
                                                    thread_name_prefix="secmac")
                metrics.set_worker_threads(self.max_workers)

    def stop(self):
        with self._lock:
            if self._executor is not None:
                self._executor.shutdown(wait=True)
                self._executor = None

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        items = list(items)
        if self._executor is None or len(items) < 2:
            return [fn(item) for item in items]
        logger.debug("Dispatching batch", extra={"items": len(items), "workers": self.max_workers})
        return list(self._executor.map(fn, items))


def chunked(items: Sequence[T], size: int) -> List[Sequence[T]]:
    return [items[i:i + size] for i in range(0, len(items), size)]
