"""
Scalar helpers shared by every bound. All logarithms are base 2.
"""
from typing import Union

import numpy as np
from scipy.stats import entropy as _entropy

from core.errors import NumericalDomainError

ArrayLike = Union[float, np.ndarray]


def cap(x: ArrayLike) -> ArrayLike:
    """log2(1 + x); accepts scalars or arrays, rejects negative arguments."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise NumericalDomainError(f"cap() needs x >= 0, got {x!r}")
    out = np.log2(1.0 + arr)
    return float(out) if out.ndim == 0 else out


def clamp_plus(x: ArrayLike) -> ArrayLike:
    out = np.maximum(np.asarray(x, dtype=float), 0.0)
    return float(out) if out.ndim == 0 else out


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise NumericalDomainError(f"binary_entropy() needs p in [0, 1], got {p!r}")
    return float(_entropy([p, 1.0 - p], base=2))
