"""
Gaussian multiple-access wiretap channel and the planar path-loss geometry
that produces it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Tuple

from core.config import settings
from core.errors import NumericalDomainError

INFINITE = math.inf

Point = Tuple[float, float]


def _check_c12(c12: float):
    if math.isnan(c12) or c12 < 0:
        raise NumericalDomainError(f"c12 must be >= 0 or INFINITE, got {c12}")


@dataclass(frozen=True)
class GaussianMacChannel:
    """
    Encoder 1 carries the message, Encoder 2 helps; Y is the destination
    output and Z the eavesdropper's. Gains are signed reals.
    """
    h1d: float
    h2d: float
    h1e: float
    h2e: float
    sigma1_sq: float = 1.0
    sigma2_sq: float = 1.0
    p1: float = 1.0
    p2: float = 1.0
    c12: float = 0.0

    def __post_init__(self):
        for name in ("h1d", "h2d", "h1e", "h2e"):
            if not math.isfinite(getattr(self, name)):
                raise NumericalDomainError(f"{name} must be finite")
        if not (self.sigma1_sq > 0 and self.sigma2_sq > 0):
            raise NumericalDomainError(
                f"noise variances must be > 0, got ({self.sigma1_sq}, {self.sigma2_sq})"
            )
        if not (self.p1 >= 0 and self.p2 >= 0) or math.isinf(self.p1) or math.isinf(self.p2):
            raise NumericalDomainError(f"power budgets must be finite and >= 0, got ({self.p1}, {self.p2})")
        _check_c12(self.c12)

    @property
    def gains(self) -> Tuple[float, float, float, float]:
        return (self.h1d, self.h2d, self.h1e, self.h2e)

    def with_c12(self, c12: float) -> "GaussianMacChannel":
        return replace(self, c12=c12)

    def with_powers(self, p1: float, p2: float) -> "GaussianMacChannel":
        return replace(self, p1=p1, p2=p2)

    def scaled(self, c: float) -> "GaussianMacChannel":
        """Gains times c, noise variances times c². Every bound is invariant."""
        return replace(
            self,
            h1d=self.h1d * c, h2d=self.h2d * c, h1e=self.h1e * c, h2e=self.h2e * c,
            sigma1_sq=self.sigma1_sq * c * c, sigma2_sq=self.sigma2_sq * c * c,
        )


def path_loss_gain(distance: float, gamma: float, min_distance: float) -> float:
    """
    d^(-gamma/2), with d clamped from below by `min_distance` so
    coincident nodes stay finite.
    """
    if not (math.isfinite(distance) and math.isfinite(gamma) and math.isfinite(min_distance)):
        raise NumericalDomainError("path_loss_gain() needs finite inputs")
    if gamma <= 0:
        raise NumericalDomainError(f"gamma must be > 0, got {gamma}")
    if min_distance <= 0:
        raise NumericalDomainError(f"min_distance must be > 0, got {min_distance}")
    if distance < 0:
        raise NumericalDomainError(f"distance must be >= 0, got {distance}")
    return max(distance, min_distance) ** (-gamma / 2.0)


@dataclass(frozen=True)
class NetworkGeometry:
    pos_enc1: Point = (0.0, 0.0)
    pos_enc2: Point = (0.5, 0.0)
    pos_dest: Point = (1.0, 0.0)
    pos_eave: Point = (1.5, 0.0)
    gamma: float = 2.0
    p1: float = 1.0
    p2: float = 1.0
    sigma1_sq: float = 1.0
    sigma2_sq: float = 1.0
    c12: float = 0.0
    min_distance: float = settings.MIN_DISTANCE

    def __post_init__(self):
        for name in ("pos_enc1", "pos_enc2", "pos_dest", "pos_eave"):
            point = tuple(float(v) for v in getattr(self, name))
            if len(point) != 2:
                raise NumericalDomainError(f"{name} must be a 2-D point, got {point}")
            object.__setattr__(self, name, point)
        if self.gamma <= 0:
            raise NumericalDomainError(f"gamma must be > 0, got {self.gamma}")
        if self.min_distance <= 0:
            raise NumericalDomainError(f"min_distance must be > 0, got {self.min_distance}")
        _check_c12(self.c12)

    @classmethod
    def line_network(cls, d: float = 0.5, c12: float = 0.0) -> "NetworkGeometry":
        """Encoder 1 at the origin, destination at 1, eavesdropper at 1.5 on the x axis."""
        return cls(pos_enc2=(d, 0.0), c12=c12)

    def reversed_roles(self) -> "NetworkGeometry":
        """Swap destination and eavesdropper positions."""
        return replace(self, pos_dest=self.pos_eave, pos_eave=self.pos_dest)

    def with_enc2(self, x: float, y: float = 0.0) -> "NetworkGeometry":
        return replace(self, pos_enc2=(x, y))


def compile_geometry(g: NetworkGeometry) -> GaussianMacChannel:
    def gain(a: Point, b: Point) -> float:
        return path_loss_gain(math.dist(a, b), g.gamma, g.min_distance)

    return GaussianMacChannel(
        h1d=gain(g.pos_enc1, g.pos_dest),
        h2d=gain(g.pos_enc2, g.pos_dest),
        h1e=gain(g.pos_enc1, g.pos_eave),
        h2e=gain(g.pos_enc2, g.pos_eave),
        sigma1_sq=g.sigma1_sq,
        sigma2_sq=g.sigma2_sq,
        p1=g.p1,
        p2=g.p2,
        c12=g.c12,
    )
