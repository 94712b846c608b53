"""
Rate-equivocation corner points of the inner and outer bounds for one
auxiliary distribution.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict

from core.errors import NumericalDomainError
from core.numerics import clamp_plus

from .channel import DiscreteMemorylessChannel
from .distributions import InnerAuxDistribution, OuterAuxDistribution, joint_law
from .information import conditional_mi


class InnerBoundForm(str, Enum):
    # Helper noise rate comes out of the destination's sum-rate.
    CHARGED = "charged"
    UNCHARGED = "uncharged"


@dataclass(frozen=True, order=True)
class RateEquivocationPoint:
    r: float
    re: float

    def __post_init__(self):
        if self.r < 0 or self.re < 0 or self.re > self.r + 1e-12:
            raise NumericalDomainError(f"need 0 <= re <= r, got r={self.r} re={self.re}")

    def dominates(self, other: "RateEquivocationPoint", tol: float = 0.0) -> bool:
        return self.r >= other.r - tol and self.re >= other.re - tol

    def to_dict(self) -> Dict[str, float]:
        return {"r": self.r, "re": self.re}


def _check_c12(c12: float):
    if c12 != c12 or c12 < 0:
        raise NumericalDomainError(f"c12 must be >= 0 or INFINITE, got {c12}")


def inner_terms(dist: InnerAuxDistribution, ch: DiscreteMemorylessChannel) -> Dict[str, float]:
    joint = joint_law(dist, ch)
    return {
        "i12y": conditional_mi(joint, ["V1", "V2"], ["Y"], ["U"]),
        "i1y": conditional_mi(joint, ["V1"], ["Y"], ["V2", "V", "U"]),
        "i2y": conditional_mi(joint, ["V2"], ["Y"], ["V", "U"]),
        "i2z": conditional_mi(joint, ["V2"], ["Z"], ["V1", "V", "U"]),
        "i12z": conditional_mi(joint, ["V1", "V2"], ["Z"], ["U"]),
    }


def inner_bound_point(dist: InnerAuxDistribution, ch: DiscreteMemorylessChannel, c12: float,
                      form: InnerBoundForm = InnerBoundForm.CHARGED) -> RateEquivocationPoint:
    """
    Corner (r, re) of the achievable region for one distribution. The helper's
    noise codeword rate n is the smaller of what the destination and the
    eavesdropper can decode.
    """
    _check_c12(c12)
    t = inner_terms(dist, ch)
    n = min(t["i2y"], t["i2z"])
    if form is InnerBoundForm.CHARGED:
        r = clamp_plus(min(t["i12y"] - n, t["i1y"] + c12))
    else:
        r = min(t["i12y"], t["i1y"] + c12)
    re = min(r, clamp_plus(r + n - t["i12z"]))
    return RateEquivocationPoint(r=r, re=re)


def outer_bound_point(dist: OuterAuxDistribution, ch: DiscreteMemorylessChannel,
                      c12: float) -> RateEquivocationPoint:
    _check_c12(c12)
    joint = joint_law(dist, ch)
    i12y = conditional_mi(joint, ["V1", "V2"], ["Y"])
    i1y = conditional_mi(joint, ["V1"], ["Y"], ["V2"])
    i12y_u = conditional_mi(joint, ["V1", "V2"], ["Y"], ["U"])
    i1y_u = conditional_mi(joint, ["V1"], ["Y"], ["V2", "U"])
    i12z_u = conditional_mi(joint, ["V1", "V2"], ["Z"], ["U"])

    r = min(i12y, i1y + c12)
    re = min(r, clamp_plus(min(i12y_u - i12z_u, i1y_u + c12 - i12z_u)))
    return RateEquivocationPoint(r=r, re=re)


def wthi_objective(dist: InnerAuxDistribution, ch: DiscreteMemorylessChannel) -> float:
    """
    Secrecy rate with no conference link and a helper that only sends an
    independent codeword. U and V must be unary.
    """
    n_u, n_v, _, _ = dist.cardinalities
    if n_u != 1 or n_v != 1:
        raise NumericalDomainError(f"needs unary U and V, got cardinalities ({n_u}, {n_v})")
    joint = joint_law(dist, ch)
    i12y = conditional_mi(joint, ["V1", "V2"], ["Y"])
    i12z = conditional_mi(joint, ["V1", "V2"], ["Z"])
    i1y = conditional_mi(joint, ["V1"], ["Y"], ["V2"])
    i1z = conditional_mi(joint, ["V1"], ["Z"])
    return clamp_plus(min(i12y - i12z, i1y - i1z))
