"""
Lattice searches over auxiliary distributions: rate-equivocation frontiers,
the helper-interferer secrecy rate, the Wyner wiretap reduction and the
cooperative MAC sum-rate.
"""
from __future__ import annotations

import itertools
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy.spatial import ConvexHull

try:
    from scipy.spatial import QhullError
except ImportError:  # scipy < 1.8
    from scipy.spatial.qhull import QhullError

from core.config import settings
from core.numerics import binary_entropy
from core.queue import EvaluationPool, chunked
from core.telemetry.metrics import metrics
from core.utils.logger import get_logger

from .channel import DiscreteMemorylessChannel, cascade_crossover, degraded_binary_wiretap
from .distributions import AuxCardinalities, InnerAuxDistribution, OuterAuxDistribution
from .lattice import DistributionLattice, TableFactor, evaluation_limit, lattice_denominator
from .region import (
    InnerBoundForm,
    RateEquivocationPoint,
    inner_bound_point,
    inner_terms,
    outer_bound_point,
    wthi_objective,
)

logger = get_logger("DmFrontier")

DEFAULT_GRID_STEP = 1.0 / 8
_CHUNK = 64

T = TypeVar("T")
R = TypeVar("R")


class FrontierBound(str, Enum):
    INNER = "inner"
    OUTER = "outer"


INNER_LABEL = "lattice-certified lower envelope"
OUTER_LABEL = "lattice-restricted upper envelope"


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

def inner_lattice(ch: DiscreteMemorylessChannel, cards: AuxCardinalities, m: int) -> DistributionLattice:
    c = cards.resolve(ch)
    return DistributionLattice([
        TableFactor("p_u", (), (c.n_u,)),
        TableFactor("p_v_u", (c.n_u,), (c.n_v,)),
        TableFactor("p_v1", (c.n_u, c.n_v), (c.n_v1,)),
        TableFactor("p_v2", (c.n_u, c.n_v), (c.n_v2,)),
        TableFactor("p_x1", (c.n_v1,), (ch.n_x1,), np.eye(ch.n_x1) if c.identity_prefix else None),
        TableFactor("p_x2", (c.n_v2,), (ch.n_x2,), np.eye(ch.n_x2) if c.identity_prefix else None),
    ], m)


def outer_lattice(ch: DiscreteMemorylessChannel, cards: AuxCardinalities, m: int) -> DistributionLattice:
    c = cards.resolve(ch)
    identity = np.einsum("ax,bw->abxw", np.eye(ch.n_x1), np.eye(ch.n_x2))
    return DistributionLattice([
        TableFactor("p_u", (), (c.n_u,)),
        TableFactor("p_v1v2_u", (c.n_u,), (c.n_v1, c.n_v2)),
        TableFactor("p_x1x2", (c.n_v1, c.n_v2), (ch.n_x1, ch.n_x2), identity if c.identity_prefix else None),
    ], m)


def wthi_lattice(ch: DiscreteMemorylessChannel, cards: AuxCardinalities, m: int) -> DistributionLattice:
    c = cards.resolve(ch)
    return DistributionLattice([
        TableFactor("p_u", (), (1,)),
        TableFactor("p_v_u", (1,), (1,)),
        TableFactor("p_v1", (1, 1), (c.n_v1,)),
        TableFactor("p_v2", (1, 1), (c.n_v2,)),
        TableFactor("p_x1", (c.n_v1,), (ch.n_x1,), np.eye(ch.n_x1) if c.identity_prefix else None),
        TableFactor("p_x2", (c.n_v2,), (ch.n_x2,), np.eye(ch.n_x2) if c.identity_prefix else None),
    ], m)


def cooperative_lattice(ch: DiscreteMemorylessChannel, m: int) -> DistributionLattice:
    # V = V2 = X2 and V1 = X1, so only p(x2) and p(x1|x2) are free.
    return DistributionLattice([
        TableFactor("p_u", (), (1,), np.ones(1)),
        TableFactor("p_v_u", (1,), (ch.n_x2,)),
        TableFactor("p_v1", (1, ch.n_x2), (ch.n_x1,)),
        TableFactor("p_v2", (1, ch.n_x2), (ch.n_x2,), np.eye(ch.n_x2)[None, :, :]),
        TableFactor("p_x1", (ch.n_x1,), (ch.n_x1,), np.eye(ch.n_x1)),
        TableFactor("p_x2", (ch.n_x2,), (ch.n_x2,), np.eye(ch.n_x2)),
    ], m)


# ---------------------------------------------------------------------------
# Evaluation plumbing
# ---------------------------------------------------------------------------

@contextmanager
def _pool_scope(pool: Optional[EvaluationPool]):
    if pool is not None:
        yield pool
        return
    with EvaluationPool() as owned:
        yield owned


def _scan(candidates: Iterable[T], evaluate: Callable[[T], R], limit: int,
          pool: EvaluationPool) -> Iterator[Tuple[T, R]]:
    """Evaluate up to `limit` candidates in chunks; yields in input order."""
    it = itertools.islice(iter(candidates), limit)
    batch_size = _CHUNK * max(pool.max_workers, 1)
    while True:
        batch = list(itertools.islice(it, batch_size))
        if not batch:
            return
        chunks = chunked(batch, _CHUNK)
        results = pool.map_ordered(lambda chunk: [evaluate(c) for c in chunk], chunks)
        for chunk, values in zip(chunks, results):
            yield from zip(chunk, values)


def _budget(budget: Optional[int]) -> int:
    return settings.LATTICE_BUDGET if budget is None else budget


# ---------------------------------------------------------------------------
# Pareto front and convex closure
# ---------------------------------------------------------------------------

def pareto(points: Iterable[RateEquivocationPoint]) -> List[RateEquivocationPoint]:
    """Nondominated points sorted by r ascending."""
    unique = sorted({(p.r, p.re) for p in points}, key=lambda t: (-t[0], -t[1]))
    front: List[RateEquivocationPoint] = []
    best_re = -math.inf
    for r, re in unique:
        if re > best_re:
            front.append(RateEquivocationPoint(r=r, re=re))
            best_re = re
    front.reverse()
    return front


def upper_concave_envelope(points: Sequence[RateEquivocationPoint]) -> List[RateEquivocationPoint]:
    """
    Nondominated vertices of the convex hull of the union of the per-point
    regions {re <= r' <= r, re' <= min(re, r')}.
    """
    if not points:
        return []
    vertices = {(0.0, 0.0)}
    for p in points:
        vertices.update({(p.r, 0.0), (p.r, p.re), (p.re, p.re)})
    arr = np.asarray(sorted(vertices), dtype=float)
    try:
        hull = ConvexHull(arr)
        arr = arr[np.sort(hull.vertices)]
    except (QhullError, ValueError):
        # Fewer than three points or all on one line: the Pareto set is exact.
        pass
    return pareto(RateEquivocationPoint(r=float(r), re=float(min(re, r))) for r, re in arr)


# ---------------------------------------------------------------------------
# Frontier enumeration
# ---------------------------------------------------------------------------

@dataclass
class FrontierReport:
    bound: FrontierBound
    c12: float
    points: List[RateEquivocationPoint]
    envelope: List[RateEquivocationPoint]
    lattice_size: int
    evaluated: int
    truncated: bool
    label: str
    grid_step: float = DEFAULT_GRID_STEP

    @property
    def max_re(self) -> float:
        return max((p.re for p in self.points), default=0.0)

    @property
    def max_r(self) -> float:
        return max((p.r for p in self.points), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound": self.bound.value,
            "c12": self.c12,
            "label": self.label,
            "grid_step": self.grid_step,
            "lattice_size": self.lattice_size,
            "evaluated": self.evaluated,
            "truncated": self.truncated,
            "max_re": self.max_re,
            "points": [p.to_dict() for p in self.points],
            "envelope": [p.to_dict() for p in self.envelope],
        }


def enumerate_frontier(ch: DiscreteMemorylessChannel, c12: float,
                       bound: FrontierBound = FrontierBound.INNER,
                       cards: Optional[AuxCardinalities] = None,
                       grid_step: float = DEFAULT_GRID_STEP,
                       budget: Optional[int] = None,
                       truncate: bool = False,
                       include_factorized: bool = True,
                       form: InnerBoundForm = InnerBoundForm.CHARGED,
                       pool: Optional[EvaluationPool] = None) -> FrontierReport:
    """
    Sweep the auxiliary-distribution lattice of one bound and return its
    Pareto frontier. The outer sweep also covers every inner candidate
    rewritten as an outer distribution, unless `include_factorized` is off.
    """
    started = time.perf_counter()
    bound = FrontierBound(bound)
    cards = cards or AuxCardinalities()
    m = lattice_denominator(grid_step)

    inner = inner_lattice(ch, cards, m)
    if bound is FrontierBound.INNER:
        lattice_size = inner.size
        candidates: Iterable[Any] = ((False, tables) for tables in inner)
    else:
        outer = outer_lattice(ch, cards, m)
        lattice_size = outer.size + (inner.size if include_factorized else 0)
        candidates = ((True, tables) for tables in outer)
        if include_factorized:
            candidates = itertools.chain(candidates, ((False, tables) for tables in inner))

    limit, truncated = evaluation_limit(lattice_size, _budget(budget), truncate)

    def evaluate(item) -> RateEquivocationPoint:
        is_outer, tables = item
        if is_outer:
            return outer_bound_point(OuterAuxDistribution(**tables), ch, c12)
        dist = InnerAuxDistribution(**tables)
        if bound is FrontierBound.INNER:
            return inner_bound_point(dist, ch, c12, form)
        return outer_bound_point(dist.as_outer(), ch, c12)

    with _pool_scope(pool) as active:
        points = [point for _, point in _scan(candidates, evaluate, limit, active)]

    front = pareto(points)
    envelope = upper_concave_envelope(front) if bound is FrontierBound.INNER else []
    report = FrontierReport(
        bound=bound,
        c12=c12,
        points=front,
        envelope=envelope,
        lattice_size=lattice_size,
        evaluated=len(points),
        truncated=truncated,
        label=INNER_LABEL if bound is FrontierBound.INNER else OUTER_LABEL,
        grid_step=grid_step,
    )
    metrics.record_lattice(bound.value, len(points))
    metrics.record_duration(f"frontier_{bound.value}", time.perf_counter() - started)
    logger.info("Enumerated frontier", extra={
        "bound": bound.value, "lattice_size": lattice_size, "evaluated": len(points),
        "truncated": truncated, "frontier_points": len(front), "max_re": report.max_re,
        "elapsed": round(time.perf_counter() - started, 6),
    })
    return report


# ---------------------------------------------------------------------------
# Single-objective lattice searches
# ---------------------------------------------------------------------------

class LatticeOptimum(NamedTuple):
    value: float
    distribution: Optional[InnerAuxDistribution]
    lattice_size: int
    evaluated: int
    truncated: bool


def _best_inner(lattice: DistributionLattice, objective: Callable[[InnerAuxDistribution], float],
                operation: str, budget: Optional[int], truncate: bool,
                pool: Optional[EvaluationPool]) -> LatticeOptimum:
    started = time.perf_counter()
    limit, truncated = evaluation_limit(lattice.size, _budget(budget), truncate)

    def evaluate(tables):
        dist = InnerAuxDistribution(**tables)
        return dist, objective(dist)

    best_value, best_dist, evaluated = -math.inf, None, 0
    with _pool_scope(pool) as active:
        for _, (dist, value) in _scan(lattice, evaluate, limit, active):
            evaluated += 1
            # Strict improvement keeps the first maximizer in lattice order.
            if value > best_value:
                best_value, best_dist = value, dist

    metrics.record_lattice(operation, evaluated)
    logger.info("Lattice search finished", extra={
        "operation": operation, "value": best_value, "lattice_size": lattice.size,
        "evaluated": evaluated, "elapsed": round(time.perf_counter() - started, 6),
    })
    return LatticeOptimum(max(best_value, 0.0), best_dist, lattice.size, evaluated, truncated)


def wthi_optimum(ch: DiscreteMemorylessChannel, grid_step: float = DEFAULT_GRID_STEP,
                 cards: Optional[AuxCardinalities] = None, budget: Optional[int] = None,
                 truncate: bool = False, pool: Optional[EvaluationPool] = None) -> LatticeOptimum:
    lattice = wthi_lattice(ch, cards or AuxCardinalities(), lattice_denominator(grid_step))
    return _best_inner(lattice, lambda dist: wthi_objective(dist, ch), "wthi", budget, truncate, pool)


def wthi_lower_bound(ch: DiscreteMemorylessChannel, grid_step: float = DEFAULT_GRID_STEP,
                     cards: Optional[AuxCardinalities] = None, budget: Optional[int] = None,
                     truncate: bool = False, pool: Optional[EvaluationPool] = None) -> float:
    """
    Best secrecy rate on the lattice with no conference link, where Encoder 2
    only sends an independent codeword. An achievable rate by construction.
    """
    return wthi_optimum(ch, grid_step, cards, budget, truncate, pool).value


def cooperative_mac_rate(ch: DiscreteMemorylessChannel, c12: float,
                         grid_step: float = DEFAULT_GRID_STEP, budget: Optional[int] = None,
                         pool: Optional[EvaluationPool] = None) -> LatticeOptimum:
    """
    Sum-rate of the MAC with conferencing and no secrecy constraint:
    max min{I(X1,X2;Y), I(X1;Y|X2) + c12} over p(x2) p(x1|x2).
    """
    def objective(dist: InnerAuxDistribution) -> float:
        t = inner_terms(dist, ch)
        return min(t["i12y"], t["i1y"] + c12)

    lattice = cooperative_lattice(ch, lattice_denominator(grid_step))
    return _best_inner(lattice, objective, "cooperative_mac", budget, False, pool)


class WynerCheck(NamedTuple):
    computed: float
    oracle: float


def wyner_reduction_check(main: float, cascade: float, grid_step: float = 1.0 / 32,
                          budget: Optional[int] = None,
                          pool: Optional[EvaluationPool] = None) -> WynerCheck:
    """
    Degraded binary wiretap channel with the helper silent and no conference
    link: the outer frontier's best equivocation against the closed-form
    secrecy capacity h(eavesdropper crossover) - h(main crossover).
    """
    ch = degraded_binary_wiretap(main, cascade)
    cards = AuxCardinalities(n_u=1, n_v=1, identity_prefix=True)
    report = enumerate_frontier(ch, 0.0, FrontierBound.OUTER, cards=cards, grid_step=grid_step,
                                budget=budget, include_factorized=False, pool=pool)
    oracle = binary_entropy(cascade_crossover(main, cascade)) - binary_entropy(main)
    return WynerCheck(computed=report.max_re, oracle=oracle)
