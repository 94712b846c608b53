"""
Discrete memoryless MAC wiretap channel p(y, z | x1, x2) and a few
constructors for the channels used in checks and examples.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import DimensionMismatchError, NumericalDomainError, ProbabilityTableError

ROW_SUM_TOL = 1e-12


def check_stochastic(name: str, table: np.ndarray, event_axes: int = 1,
                     tol: float = ROW_SUM_TOL) -> np.ndarray:
    """
    Validate that `table` is a conditional law whose last `event_axes` axes
    hold the distribution. Raises ProbabilityTableError naming the first bad row.
    """
    arr = np.asarray(table, dtype=float)
    if arr.ndim < event_axes:
        raise DimensionMismatchError(f"{name} needs at least {event_axes} axes, got {arr.ndim}")
    if np.any(~np.isfinite(arr)):
        raise ProbabilityTableError(name, None, "entries must be finite")
    row_shape = arr.shape[: arr.ndim - event_axes]
    flat = arr.reshape(row_shape + (-1,))
    bad_entry = np.argwhere((flat < 0) | (flat > 1))
    if bad_entry.size:
        row = tuple(int(i) for i in bad_entry[0][:-1])
        raise ProbabilityTableError(name, row, "entries must lie in [0, 1]")
    sums = flat.sum(axis=-1)
    bad_rows = np.argwhere(np.abs(sums - 1.0) > tol)
    if bad_rows.size:
        row = tuple(int(i) for i in bad_rows[0])
        raise ProbabilityTableError(name, row, f"sums to {float(sums[row]):.12g}, expected 1")
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteMemorylessChannel:
    """`law[x1, x2, y, z]` = p(y, z | x1, x2)."""
    law: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.law, dtype=float)
        if arr.ndim != 4:
            raise DimensionMismatchError(f"channel law needs 4 axes (x1, x2, y, z), got {arr.ndim}")
        if min(arr.shape) < 1:
            raise DimensionMismatchError(f"alphabet sizes must be >= 1, got {arr.shape}")
        arr = check_stochastic("law", arr, event_axes=2).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "law", arr)

    @property
    def n_x1(self) -> int:
        return self.law.shape[0]

    @property
    def n_x2(self) -> int:
        return self.law.shape[1]

    @property
    def n_y(self) -> int:
        return self.law.shape[2]

    @property
    def n_z(self) -> int:
        return self.law.shape[3]

    @property
    def shape(self) -> Tuple[int, int, int, int]:
        return self.law.shape

    def main_channel(self) -> np.ndarray:
        """p(y | x1, x2)."""
        return self.law.sum(axis=3)

    def eavesdropper_channel(self) -> np.ndarray:
        """p(z | x1, x2)."""
        return self.law.sum(axis=2)


def cascade_crossover(p: float, q: float) -> float:
    """Crossover of two binary symmetric channels in series."""
    return p * (1.0 - q) + q * (1.0 - p)


def binary_symmetric(p: float) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise NumericalDomainError(f"crossover must lie in [0, 1], got {p}")
    return np.array([[1.0 - p, p], [p, 1.0 - p]])


def from_components(p_y: np.ndarray, p_z: np.ndarray) -> DiscreteMemorylessChannel:
    """Outputs conditionally independent given the inputs: p(y|x1,x2) p(z|x1,x2)."""
    p_y = check_stochastic("p_y", p_y)
    p_z = check_stochastic("p_z", p_z)
    if p_y.ndim != 3 or p_z.ndim != 3 or p_y.shape[:2] != p_z.shape[:2]:
        raise DimensionMismatchError(
            f"component laws must share the (x1, x2) axes, got {p_y.shape} and {p_z.shape}"
        )
    return DiscreteMemorylessChannel(np.einsum("abi,abj->abij", p_y, p_z))


def eavesdropper_copy(p_y: np.ndarray) -> DiscreteMemorylessChannel:
    """Z is an exact copy of Y."""
    p_y = check_stochastic("p_y", p_y)
    n_y = p_y.shape[-1]
    return DiscreteMemorylessChannel(np.einsum("abi,ij->abij", p_y, np.eye(n_y)))


def degraded_binary_wiretap(main: float, cascade: float) -> DiscreteMemorylessChannel:
    """
    Binary X1, unary X2. Y is X1 through a BSC(main) and Z is Y through a
    BSC(cascade), so Z sees X1 through BSC(cascade_crossover(main, cascade)).
    """
    w = binary_symmetric(main)
    v = binary_symmetric(cascade)
    law = np.einsum("ay,yz->ayz", w, v)[:, None, :, :]
    return DiscreteMemorylessChannel(law)


def noiseless_secure() -> DiscreteMemorylessChannel:
    """Y = X1 binary, Z constant, X2 unary."""
    return DiscreteMemorylessChannel(np.eye(2)[:, None, :, None])


def random_channel(rng: np.random.Generator, n_x1: int = 2, n_x2: int = 2,
                   n_y: int = 2, n_z: int = 2,
                   concentration: Optional[Sequence[float]] = None) -> DiscreteMemorylessChannel:
    alpha = np.ones(n_y * n_z) if concentration is None else np.asarray(concentration, dtype=float)
    rows = rng.dirichlet(alpha, size=(n_x1, n_x2))
    rows = rows / rows.sum(axis=-1, keepdims=True)
    return DiscreteMemorylessChannel(rows.reshape(n_x1, n_x2, n_y, n_z))
