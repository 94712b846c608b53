"""
Auxiliary-variable laws for the inner and outer rate-equivocation bounds and
the joint tables they induce with a channel.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from core.errors import DimensionMismatchError

from .channel import DiscreteMemorylessChannel, check_stochastic
from .information import JointLaw

INNER_AXES = ("U", "V", "V1", "V2", "X1", "X2", "Y", "Z")
OUTER_AXES = ("U", "V1", "V2", "X1", "X2", "Y", "Z")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AuxCardinalities:
    """
    Alphabet sizes of the auxiliary variables. Unset V1/V2 default to one
    more than the matching input alphabet. With `identity_prefix` the
    auxiliaries are the channel inputs themselves (V1 = X1, V2 = X2).
    """
    n_u: int = 2
    n_v: int = 2
    n_v1: Optional[int] = None
    n_v2: Optional[int] = None
    identity_prefix: bool = False

    def resolve(self, ch: DiscreteMemorylessChannel) -> "AuxCardinalities":
        if self.identity_prefix:
            n_v1, n_v2 = ch.n_x1, ch.n_x2
        else:
            n_v1 = ch.n_x1 + 1 if self.n_v1 is None else self.n_v1
            n_v2 = ch.n_x2 + 1 if self.n_v2 is None else self.n_v2
        resolved = AuxCardinalities(self.n_u, self.n_v, n_v1, n_v2, self.identity_prefix)
        for name in ("n_u", "n_v", "n_v1", "n_v2"):
            if getattr(resolved, name) < 1:
                raise DimensionMismatchError(f"{name} must be >= 1, got {getattr(resolved, name)}")
        return resolved


@dataclass(frozen=True, eq=False)
class InnerAuxDistribution:
    """
    p(u) p(v|u) p(v1|v,u) p(v2|v,u) p(x1|v1) p(x2|v2).

    Table layouts: p_u[u], p_v_u[u, v], p_v1[u, v, v1], p_v2[u, v, v2],
    p_x1[v1, x1], p_x2[v2, x2].
    """
    p_u: np.ndarray
    p_v_u: np.ndarray
    p_v1: np.ndarray
    p_v2: np.ndarray
    p_x1: np.ndarray
    p_x2: np.ndarray

    def __post_init__(self):
        for name, ndim in (("p_u", 1), ("p_v_u", 2), ("p_v1", 3), ("p_v2", 3), ("p_x1", 2), ("p_x2", 2)):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != ndim:
                raise DimensionMismatchError(f"{name} needs {ndim} axes, got {arr.ndim}")
            object.__setattr__(self, name, _frozen(check_stochastic(name, arr)))
        n_u, n_v = self.p_v_u.shape
        if self.p_u.shape[0] != n_u:
            raise DimensionMismatchError(f"p_v_u has {n_u} rows but p_u has {self.p_u.shape[0]} entries")
        if self.p_v1.shape[:2] != (n_u, n_v) or self.p_v2.shape[:2] != (n_u, n_v):
            raise DimensionMismatchError("p_v1 and p_v2 must be indexed by (u, v)")
        if self.p_x1.shape[0] != self.p_v1.shape[2] or self.p_x2.shape[0] != self.p_v2.shape[2]:
            raise DimensionMismatchError("channel prefixes must be indexed by v1 and v2")

    @property
    def cardinalities(self) -> Tuple[int, int, int, int]:
        return (self.p_u.shape[0], self.p_v_u.shape[1], self.p_v1.shape[2], self.p_v2.shape[2])

    @classmethod
    def independent(cls, p_v1: np.ndarray, p_v2: np.ndarray,
                    p_x1: Optional[np.ndarray] = None,
                    p_x2: Optional[np.ndarray] = None) -> "InnerAuxDistribution":
        """Unary U and V; identity prefixes when none are given."""
        p_v1 = np.asarray(p_v1, dtype=float)
        p_v2 = np.asarray(p_v2, dtype=float)
        return cls(
            p_u=np.ones(1),
            p_v_u=np.ones((1, 1)),
            p_v1=p_v1.reshape(1, 1, -1),
            p_v2=p_v2.reshape(1, 1, -1),
            p_x1=np.eye(p_v1.size) if p_x1 is None else p_x1,
            p_x2=np.eye(p_v2.size) if p_x2 is None else p_x2,
        )

    def as_outer(self) -> "OuterAuxDistribution":
        """
        Merge (V, V1, V2) into a single outer V1 and leave V2 unary. The
        result satisfies the outer bound's Markov chain.
        """
        n_u, n_v, n_v1, n_v2 = self.cardinalities
        merged = np.einsum("uv,uva,uvb->uvab", self.p_v_u, self.p_v1, self.p_v2)
        p_v1v2_u = merged.reshape(n_u, n_v * n_v1 * n_v2, 1)
        prefix = np.einsum("ax,bw->abxw", self.p_x1, self.p_x2)
        p_x1x2 = np.broadcast_to(
            prefix[None, :, :, :, :], (n_v, n_v1, n_v2) + prefix.shape[2:]
        ).reshape(n_v * n_v1 * n_v2, 1, *prefix.shape[2:])
        return OuterAuxDistribution(p_u=self.p_u, p_v1v2_u=p_v1v2_u, p_x1x2=p_x1x2)


@dataclass(frozen=True, eq=False)
class OuterAuxDistribution:
    """
    p(u) p(v1,v2|u) p(x1,x2|v1,v2). The input pair may be correlated given
    the auxiliaries.

    Table layouts: p_u[u], p_v1v2_u[u, v1, v2], p_x1x2[v1, v2, x1, x2].
    """
    p_u: np.ndarray
    p_v1v2_u: np.ndarray
    p_x1x2: np.ndarray

    def __post_init__(self):
        for name, ndim, event_axes in (("p_u", 1, 1), ("p_v1v2_u", 3, 2), ("p_x1x2", 4, 2)):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != ndim:
                raise DimensionMismatchError(f"{name} needs {ndim} axes, got {arr.ndim}")
            object.__setattr__(self, name, _frozen(check_stochastic(name, arr, event_axes)))
        if self.p_v1v2_u.shape[0] != self.p_u.shape[0]:
            raise DimensionMismatchError("p_v1v2_u must be indexed by u")
        if self.p_x1x2.shape[:2] != self.p_v1v2_u.shape[1:]:
            raise DimensionMismatchError("p_x1x2 must be indexed by (v1, v2)")

    @property
    def cardinalities(self) -> Tuple[int, int, int]:
        return (self.p_u.shape[0],) + tuple(self.p_v1v2_u.shape[1:])


AuxDistribution = Union[InnerAuxDistribution, OuterAuxDistribution]


def joint_law(dist: AuxDistribution, ch: DiscreteMemorylessChannel) -> JointLaw:
    """Full joint table over the auxiliaries, the inputs and both outputs."""
    if isinstance(dist, InnerAuxDistribution):
        if dist.p_x1.shape[1] != ch.n_x1 or dist.p_x2.shape[1] != ch.n_x2:
            raise DimensionMismatchError(
                f"prefix alphabets ({dist.p_x1.shape[1]}, {dist.p_x2.shape[1]}) "
                f"do not match channel inputs ({ch.n_x1}, {ch.n_x2})"
            )
        table = np.einsum(
            "u,uv,uva,uvb,ax,bw,xwyz->uvabxwyz",
            dist.p_u, dist.p_v_u, dist.p_v1, dist.p_v2, dist.p_x1, dist.p_x2, ch.law,
            optimize=True,
        )
        return JointLaw(table, INNER_AXES)

    if dist.p_x1x2.shape[2:] != (ch.n_x1, ch.n_x2):
        raise DimensionMismatchError(
            f"input alphabets {dist.p_x1x2.shape[2:]} do not match channel inputs ({ch.n_x1}, {ch.n_x2})"
        )
    table = np.einsum(
        "u,uab,abxw,xwyz->uabxwyz",
        dist.p_u, dist.p_v1v2_u, dist.p_x1x2, ch.law,
        optimize=True,
    )
    return JointLaw(table, OUTER_AXES)
