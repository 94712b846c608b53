"""
Exhaustive enumeration of conditional probability tables whose rows lie on
the simplex lattice with denominator m.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import LatticeBudgetExceeded, NumericalDomainError


def lattice_denominator(grid_step: float) -> int:
    if not 0 < grid_step <= 1:
        raise NumericalDomainError(f"grid_step must lie in (0, 1], got {grid_step}")
    m = int(round(1.0 / grid_step))
    if abs(m * grid_step - 1.0) > 1e-9:
        raise NumericalDomainError(f"grid_step must be 1/m for an integer m, got {grid_step}")
    return m


def simplex_size(k: int, m: int) -> int:
    return math.comb(m + k - 1, k - 1)


def simplex_lattice(k: int, m: int) -> np.ndarray:
    """All probability vectors of length k with entries in {0, 1/m, ..., 1}."""
    if k < 1 or m < 1:
        raise NumericalDomainError(f"simplex lattice needs k >= 1 and m >= 1, got k={k} m={m}")
    points = []
    # Stars and bars: k-1 bar positions among m+k-1 slots.
    for bars in itertools.combinations(range(m + k - 1), k - 1):
        edges = (-1,) + bars + (m + k - 1,)
        points.append([edges[i + 1] - edges[i] - 1 for i in range(k)])
    return np.asarray(points, dtype=float) / m


@dataclass(frozen=True)
class TableFactor:
    """One conditional table: a simplex point per row, or a fixed table."""
    name: str
    rows: Tuple[int, ...]
    event_shape: Tuple[int, ...]
    fixed: Optional[np.ndarray] = None

    @property
    def n_rows(self) -> int:
        return int(np.prod(self.rows, dtype=int)) if self.rows else 1

    @property
    def k(self) -> int:
        return int(np.prod(self.event_shape, dtype=int))

    def size(self, m: int) -> int:
        if self.fixed is not None:
            return 1
        return simplex_size(self.k, m) ** self.n_rows

    def candidates(self, m: int) -> Iterator[np.ndarray]:
        if self.fixed is not None:
            yield self.fixed
            return
        points = simplex_lattice(self.k, m)
        shape = self.rows + self.event_shape
        for combo in itertools.product(range(len(points)), repeat=self.n_rows):
            yield points[list(combo)].reshape(shape)


class DistributionLattice:
    """Cartesian product of table factors, enumerated lazily in a fixed order."""

    def __init__(self, factors: Sequence[TableFactor], m: int):
        self.factors: List[TableFactor] = list(factors)
        self.m = m

    @property
    def size(self) -> int:
        total = 1
        for factor in self.factors:
            total *= factor.size(self.m)
        return total

    def __iter__(self) -> Iterator[Dict[str, np.ndarray]]:
        return self._product(0)

    def _product(self, start: int) -> Iterator[Dict[str, np.ndarray]]:
        if start == len(self.factors):
            yield {}
            return
        head = self.factors[start]
        for table in head.candidates(self.m):
            for rest in self._product(start + 1):
                rest[head.name] = table
                yield rest


def evaluation_limit(lattice_size: int, budget: int, truncate: bool) -> Tuple[int, bool]:
    """Number of cells to evaluate and whether the search is truncated."""
    if lattice_size <= budget:
        return lattice_size, False
    if not truncate:
        raise LatticeBudgetExceeded(lattice_size, budget)
    return budget, True
