"""
Deterministic bounded-box maximizer: a coarse lattice followed by rounds of
shrinking local lattices around the incumbent.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from core.config import settings
from core.errors import InfeasibleProblemError, NumericalDomainError
from core.telemetry.metrics import metrics
from core.utils.logger import get_logger

logger = get_logger("Optimizer")

Objective = Callable[[np.ndarray], np.ndarray]

# Points this far outside the box are floating-point noise, not escapes.
_BOX_SLACK = 1e-12


@dataclass(frozen=True)
class GridSpec:
    dims: int
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]
    coarse_steps: int = 101
    refine_rounds: int = 4
    refine_shrink: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        if self.dims < 1 or len(self.lo) != self.dims or len(self.hi) != self.dims:
            raise NumericalDomainError(
                f"GridSpec needs {self.dims} bounds per side, got lo={self.lo} hi={self.hi}"
            )
        for i, (a, b) in enumerate(zip(self.lo, self.hi)):
            if not (np.isfinite(a) and np.isfinite(b)) or a > b:
                raise NumericalDomainError(f"GridSpec dimension {i}: lo={a} must be <= hi={b}")
        if self.coarse_steps < 2:
            raise NumericalDomainError(f"coarse_steps must be >= 2, got {self.coarse_steps}")
        if self.refine_rounds < 0:
            raise NumericalDomainError(f"refine_rounds must be >= 0, got {self.refine_rounds}")
        if not 0.0 < self.refine_shrink < 1.0:
            raise NumericalDomainError(f"refine_shrink must lie in (0, 1), got {self.refine_shrink}")

    @classmethod
    def box(cls, lo: Sequence[float], hi: Sequence[float],
            coarse_steps: Optional[int] = None,
            refine_rounds: Optional[int] = None,
            refine_shrink: Optional[float] = None) -> "GridSpec":
        """Box spec with unset resolution fields taken from settings."""
        return cls(
            dims=len(lo),
            lo=tuple(lo),
            hi=tuple(hi),
            coarse_steps=settings.GRID_STEPS if coarse_steps is None else coarse_steps,
            refine_rounds=settings.REFINE_ROUNDS if refine_rounds is None else refine_rounds,
            refine_shrink=settings.REFINE_SHRINK if refine_shrink is None else refine_shrink,
        )

    @property
    def spacing(self) -> np.ndarray:
        return (np.asarray(self.hi) - np.asarray(self.lo)) / (self.coarse_steps - 1)


class Optimum(NamedTuple):
    argmax: Tuple[float, ...]
    value: float


def _lattice(axes: Sequence[np.ndarray]) -> np.ndarray:
    # "ij" indexing + C-order reshape enumerates points lexicographically.
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _evaluate(f: Objective, points: np.ndarray) -> np.ndarray:
    values = np.asarray(f(points), dtype=float).reshape(-1)
    if values.shape[0] != points.shape[0]:
        raise NumericalDomainError(
            f"objective returned {values.shape[0]} values for {points.shape[0]} points"
        )
    if np.any(np.isnan(values)):
        bad = points[np.isnan(values)][0]
        raise NumericalDomainError(f"objective is NaN at {tuple(bad)}")
    return values


def _lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    for x, y in zip(a, b):
        if x != y:
            return bool(x < y)
    return False


def _better(incumbent: np.ndarray, incumbent_value: float,
            candidates: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, float]:
    """Replace the incumbent only if strictly better, or equal and lexicographically smaller."""
    k = int(np.argmax(values))
    value = float(values[k])
    if value > incumbent_value or (value == incumbent_value and _lex_less(candidates[k], incumbent)):
        return candidates[k].copy(), value
    return incumbent, incumbent_value


def maximize(f: Objective, spec: GridSpec, operation: str = "maximize",
             hints: Optional[Sequence[Sequence[float]]] = None) -> Optimum:
    """
    Maximize a vectorized objective over the closed box of `spec`.

    `f` maps an (n, dims) array to n values. Cells evaluating to -inf are
    treated as infeasible. Ties go to the lexicographically smallest point,
    so results do not depend on evaluation order. `hints` are extra starting
    candidates; the result is never worse than any of them.
    """
    started = time.perf_counter()
    lo = np.asarray(spec.lo)
    hi = np.asarray(spec.hi)

    axes = [np.linspace(lo[i], hi[i], spec.coarse_steps) for i in range(spec.dims)]
    points = _lattice(axes)
    values = _evaluate(f, points)
    evaluations = len(values)

    best = int(np.argmax(values))
    incumbent, incumbent_value = points[best].copy(), float(values[best])
    if hints:
        extra = np.clip(np.asarray(hints, dtype=float).reshape(-1, spec.dims), lo, hi)
        extra_values = _evaluate(f, extra)
        evaluations += len(extra_values)
        incumbent, incumbent_value = _better(incumbent, incumbent_value, extra, extra_values)
    if incumbent_value == -np.inf:
        raise InfeasibleProblemError(f"{operation}: every lattice cell is infeasible")

    half = int(round(1.0 / spec.refine_shrink))
    offsets = np.arange(-half, half + 1, dtype=float)
    h = spec.spacing
    for _ in range(spec.refine_rounds):
        h = h * spec.refine_shrink
        local_axes = [incumbent[i] + offsets * h[i] for i in range(spec.dims)]
        candidates = _lattice(local_axes)
        inside = np.all((candidates >= lo - _BOX_SLACK) & (candidates <= hi + _BOX_SLACK), axis=1)
        candidates = np.clip(candidates[inside], lo, hi)
        local_values = _evaluate(f, candidates)
        evaluations += len(local_values)

        incumbent, incumbent_value = _better(incumbent, incumbent_value, candidates, local_values)

    metrics.record_evaluations(operation, evaluations)
    metrics.record_duration(operation, time.perf_counter() - started)
    logger.debug("Maximized objective", extra={
        "operation": operation,
        "value": incumbent_value,
        "argmax": tuple(float(v) for v in incumbent),
        "evaluations": evaluations,
    })
    return Optimum(argmax=tuple(float(v) for v in incumbent), value=incumbent_value)
