"""
Entropy and conditional mutual information over named joint tables.
"""
from __future__ import annotations

import math
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple, Union

import numpy as np
from scipy.special import entr

from core.errors import DimensionMismatchError, OverlappingVariablesError

LN2 = math.log(2.0)

Variable = Union[str, int]


def entropy(p: np.ndarray) -> float:
    """Shannon entropy in bits of any probability table; 0 log 0 = 0."""
    return float(entr(np.asarray(p, dtype=float)).sum() / LN2)


class JointLaw:
    """
    Joint probability table with one named axis per random variable.
    Marginal entropies are cached, so one JointLaw should not be shared
    between threads while it is being queried.
    """

    def __init__(self, table: np.ndarray, axes: Sequence[str]):
        table = np.asarray(table, dtype=float)
        if table.ndim != len(axes):
            raise DimensionMismatchError(f"table has {table.ndim} axes but {len(axes)} names")
        if len(set(axes)) != len(axes):
            raise DimensionMismatchError(f"axis names must be unique, got {tuple(axes)}")
        self.table = table
        self.axes: Tuple[str, ...] = tuple(axes)
        self._entropy_cache: Dict[FrozenSet[int], float] = {}

    @property
    def total(self) -> float:
        return float(self.table.sum())

    def axis(self, var: Variable) -> int:
        if isinstance(var, (int, np.integer)):
            if not 0 <= var < self.table.ndim:
                raise DimensionMismatchError(f"axis {var} out of range for {self.table.ndim} axes")
            return int(var)
        try:
            return self.axes.index(var)
        except ValueError:
            raise DimensionMismatchError(f"unknown variable {var!r}; known: {self.axes}") from None

    def axes_of(self, variables: Iterable[Variable]) -> FrozenSet[int]:
        return frozenset(self.axis(v) for v in variables)

    def marginal(self, keep: Iterable[Variable]) -> np.ndarray:
        keep_axes = self.axes_of(keep)
        drop = tuple(i for i in range(self.table.ndim) if i not in keep_axes)
        return self.table.sum(axis=drop) if drop else self.table

    def entropy_of(self, variables: Iterable[Variable]) -> float:
        key = self.axes_of(variables)
        if not key:
            return 0.0
        if key not in self._entropy_cache:
            self._entropy_cache[key] = entropy(self.marginal(key))
        return self._entropy_cache[key]


def _as_joint(joint: Union[JointLaw, np.ndarray]) -> JointLaw:
    if isinstance(joint, JointLaw):
        return joint
    table = np.asarray(joint, dtype=float)
    return JointLaw(table, tuple(f"A{i}" for i in range(table.ndim)))


def conditional_mi(joint: Union[JointLaw, np.ndarray],
                   a: Iterable[Variable],
                   b: Iterable[Variable],
                   c: Iterable[Variable] = ()) -> float:
    """
    I(A; B | C) in bits. Variables are axis names or axis indices; a raw
    ndarray is addressed by index.
    """
    law = _as_joint(joint)
    sa, sb, sc = law.axes_of(a), law.axes_of(b), law.axes_of(c)
    if sa & sb or sa & sc or sb & sc:
        raise OverlappingVariablesError(
            f"variable sets overlap: {sorted(sa)}, {sorted(sb)}, {sorted(sc)}"
        )
    if not sa or not sb:
        return 0.0
    value = (law.entropy_of(sa | sc) + law.entropy_of(sb | sc)
             - law.entropy_of(sa | sb | sc) - law.entropy_of(sc))
    return max(value, 0.0)


def brute_force_mi(table: np.ndarray, a: Sequence[int], b: Sequence[int],
                   c: Sequence[int] = ()) -> float:
    """
    I(A; B | C) by direct summation over the joint. Slow; used to cross-check
    conditional_mi.
    """
    table = np.asarray(table, dtype=float)
    n = table.ndim

    def marg(keep):
        drop = tuple(i for i in range(n) if i not in keep)
        m = table.sum(axis=drop, keepdims=True) if drop else table
        return np.broadcast_to(m, table.shape)

    keep_abc = set(a) | set(b) | set(c)
    p_abc = marg(keep_abc)
    p_ac = marg(set(a) | set(c))
    p_bc = marg(set(b) | set(c))
    p_c = marg(set(c))
    # Summing over full cells weights every abc-cell by p(a, b, c).
    total = 0.0
    for idx in np.ndindex(table.shape):
        p = table[idx]
        if p <= 0.0:
            continue
        total += p * math.log2(p_abc[idx] * p_c[idx] / (p_ac[idx] * p_bc[idx]))
    return total
