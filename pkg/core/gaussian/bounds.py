"""
Secrecy-rate bounds for the Gaussian MAC with a conferencing helper.

Every public bound optimizes a closed-form objective with the grid maximizer
and returns a BoundReport. Values are clamped at zero; the unclamped optimum
is kept in `raw_value`.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import settings
from core.errors import NumericalDomainError
from core.numerics import GridSpec, cap, clamp_plus, maximize
from core.utils.logger import get_logger

from .model import INFINITE, GaussianMacChannel

logger = get_logger("GaussianBounds")

ArrayLike = Union[float, np.ndarray]

# Rounding can push a quadratic form this far below zero relative to its scale.
_QUADRATIC_SLACK = 1e-12


class LowerBoundForm(str, Enum):
    # Helper noise codeword shares the destination's sum-rate with the message.
    CHARGED = "charged"
    # Noise codeword rate credited on top of the message-rate bound.
    UNCHARGED = "uncharged"


@dataclass(frozen=True)
class LowerBoundParams:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise NumericalDomainError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class BoundReport:
    value: float
    argmax: Tuple[float, ...]
    argmax_names: Tuple[str, ...]
    raw_value: float
    noise_power: Optional[float] = None
    conf_power: Optional[float] = None
    extras: Dict[str, Any] = field(default_factory=dict, compare=False)

    def param(self, name: str) -> float:
        return self.argmax[self.argmax_names.index(name)]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "value": self.value,
            "raw_value": self.raw_value,
            "argmax": dict(zip(self.argmax_names, self.argmax)),
        }
        if self.noise_power is not None:
            out["noise_power"] = self.noise_power
            out["conf_power"] = self.conf_power
        out.update(self.extras)
        return out


def _grid(lo, hi, steps: Optional[int], refine_rounds: Optional[int]) -> GridSpec:
    return GridSpec.box(lo, hi,
                        coarse_steps=settings.GAUSSIAN_GRID_STEPS if steps is None else steps,
                        refine_rounds=refine_rounds)


def _resolve(x: ArrayLike) -> ArrayLike:
    return float(x) if np.ndim(x) == 0 else x


def _nonnegative_quadratic(s: np.ndarray, scale: np.ndarray, what: str) -> np.ndarray:
    tol = _QUADRATIC_SLACK * np.maximum(scale, 1.0)
    if np.any(s < -tol):
        raise NumericalDomainError(f"{what} received power is negative: {np.min(s)}")
    return np.maximum(s, 0.0)


def _received_power(ha: float, hb: float, pa: float, pb: float, corr: np.ndarray, what: str):
    scale = ha * ha * pa + hb * hb * pb
    s = scale + 2.0 * corr * ha * hb * math.sqrt(pa * pb)
    return _nonnegative_quadratic(np.asarray(s, dtype=float), np.asarray(scale), what)


# ---------------------------------------------------------------------------
# Full-cooperation upper bound
# ---------------------------------------------------------------------------

def upper_bound_value(ch: GaussianMacChannel, psi: ArrayLike) -> ArrayLike:
    """
    I(X1,X2;Y) - I(X1,X2;Z) for jointly Gaussian inputs at full power with
    correlation coefficient `psi`. Not clamped.
    """
    psi_arr = np.asarray(psi, dtype=float)
    if np.any(np.isnan(psi_arr)) or np.any(np.abs(psi_arr) > 1.0):
        raise NumericalDomainError(f"psi must lie in [-1, 1], got {psi!r}")
    s_d = _received_power(ch.h1d, ch.h2d, ch.p1, ch.p2, psi_arr, "destination")
    s_e = _received_power(ch.h1e, ch.h2e, ch.p1, ch.p2, psi_arr, "eavesdropper")
    return _resolve(cap(s_d / ch.sigma1_sq) - cap(s_e / ch.sigma2_sq))


def _upper_report(ch: GaussianMacChannel, operation: str,
                  steps: Optional[int], refine_rounds: Optional[int]) -> BoundReport:
    spec = _grid([-1.0], [1.0], steps, refine_rounds)
    opt = maximize(lambda pts: upper_bound_value(ch, pts[:, 0]), spec, operation=operation)
    return BoundReport(
        value=clamp_plus(opt.value),
        argmax=opt.argmax,
        argmax_names=("psi",),
        raw_value=opt.value,
    )


def upper_bound(ch: GaussianMacChannel, steps: Optional[int] = None,
                refine_rounds: Optional[int] = None) -> BoundReport:
    """Maximum of upper_bound_value over psi in [-1, 1]; independent of c12."""
    started = time.perf_counter()
    report = _upper_report(ch, "upper_bound", steps, refine_rounds)
    logger.debug("Computed upper bound", extra={
        "operation": "upper_bound", "value": report.value, "argmax": report.argmax,
        "elapsed": round(time.perf_counter() - started, 6),
    })
    return report


def full_cooperation_capacity(ch: GaussianMacChannel, steps: Optional[int] = None,
                              refine_rounds: Optional[int] = None) -> BoundReport:
    """Secrecy capacity with an unlimited conference link; same computation as upper_bound."""
    report = _upper_report(ch.with_c12(INFINITE), "full_cooperation_capacity", steps, refine_rounds)
    logger.debug("Computed full-cooperation capacity", extra={
        "operation": "full_cooperation_capacity", "value": report.value,
    })
    return report


# ---------------------------------------------------------------------------
# Power-split lower bound
# ---------------------------------------------------------------------------

def _lower_objective(ch: GaussianMacChannel, alpha: np.ndarray, beta: np.ndarray,
                     form: LowerBoundForm) -> np.ndarray:
    a1d = ch.h1d * ch.h1d * ch.p1
    a2d = ch.h2d * ch.h2d * ch.p2
    a1e = ch.h1e * ch.h1e * ch.p1
    a2e = ch.h2e * ch.h2e * ch.p2

    # Correlated part of the two codewords: sqrt(alpha_bar * beta_bar).
    s = np.sqrt(np.clip((1.0 - alpha) * (1.0 - beta), 0.0, 1.0))
    cross_d = 2.0 * s * abs(ch.h1d * ch.h2d) * math.sqrt(ch.p1 * ch.p2)
    cross_e = 2.0 * s * abs(ch.h1e * ch.h2e) * math.sqrt(ch.p1 * ch.p2)

    noise_rate = np.minimum(
        cap(beta * a2d / (ch.sigma1_sq + alpha * a1d)),
        cap(beta * a2e / ch.sigma2_sq),
    )
    private = cap(alpha * a1d / ch.sigma1_sq)
    if math.isinf(ch.c12):
        private = np.full_like(private, np.inf, dtype=float)
    else:
        private = private + ch.c12
    sum_rate = cap((a1d + a2d + cross_d) / ch.sigma1_sq)
    leak = cap((a1e + a2e + cross_e) / ch.sigma2_sq)

    if form is LowerBoundForm.CHARGED:
        return np.minimum(private + noise_rate, sum_rate) - leak
    return noise_rate + np.minimum(private, sum_rate) - leak


def lower_bound_value(ch: GaussianMacChannel, p: LowerBoundParams,
                      form: LowerBoundForm = LowerBoundForm.CHARGED) -> float:
    raw = _lower_objective(ch, np.asarray([p.alpha]), np.asarray([p.beta]), form)
    return clamp_plus(float(raw[0]))


def lower_bound(ch: GaussianMacChannel, form: LowerBoundForm = LowerBoundForm.CHARGED,
                steps: Optional[int] = None, refine_rounds: Optional[int] = None,
                hints: Optional[Sequence[Tuple[float, float]]] = None) -> BoundReport:
    """
    Maximum of lower_bound_value over (alpha, beta) in [0, 1]^2.

    `hints` seed the search with known maximizers, e.g. from a smaller c12,
    so chained calls never lose value to the refinement path.
    """
    started = time.perf_counter()
    spec = _grid([0.0, 0.0], [1.0, 1.0], steps, refine_rounds)
    opt = maximize(lambda pts: _lower_objective(ch, pts[:, 0], pts[:, 1], form),
                   spec, operation="lower_bound", hints=hints)
    alpha, beta = opt.argmax
    report = BoundReport(
        value=clamp_plus(opt.value),
        argmax=opt.argmax,
        argmax_names=("alpha", "beta"),
        raw_value=opt.value,
        noise_power=beta * ch.p2,
        conf_power=(1.0 - beta) * ch.p2,
    )
    logger.debug("Computed lower bound", extra={
        "operation": "lower_bound", "value": report.value, "alpha": alpha, "beta": beta,
        "c12": ch.c12, "form": form.value, "elapsed": round(time.perf_counter() - started, 6),
    })
    return report


# ---------------------------------------------------------------------------
# No conference link
# ---------------------------------------------------------------------------

def _check_power_box(ch: GaussianMacChannel, x1: np.ndarray, x2: np.ndarray):
    slack = 1e-12
    if (np.any(np.isnan(x1)) or np.any(np.isnan(x2))
            or np.any(x1 < -slack) or np.any(x1 > ch.p1 + slack)
            or np.any(x2 < -slack) or np.any(x2 > ch.p2 + slack)):
        raise NumericalDomainError(
            f"powers must lie in [0, {ch.p1}] x [0, {ch.p2}], got ({x1!r}, {x2!r})"
        )


def c12_zero_bound_value(ch: GaussianMacChannel, x1: ArrayLike, x2: ArrayLike) -> ArrayLike:
    """Wiretap rate of Encoder 1 at power x1 while Encoder 2 jams at power x2."""
    x1a = np.asarray(x1, dtype=float)
    x2a = np.asarray(x2, dtype=float)
    _check_power_box(ch, x1a, x2a)
    x1a = np.clip(x1a, 0.0, None)
    x2a = np.clip(x2a, 0.0, None)
    main = cap(ch.h1d * ch.h1d * x1a / ch.sigma1_sq)
    leak = cap(ch.h1e * ch.h1e * x1a / (ch.sigma2_sq + ch.h2e * ch.h2e * x2a))
    return _resolve(clamp_plus(main - leak))


def c12_zero_condition(ch: GaussianMacChannel, x1: ArrayLike, x2: ArrayLike):
    """Destination decodes the jamming codeword at least as well as the eavesdropper."""
    x1a = np.asarray(x1, dtype=float)
    x2a = np.asarray(x2, dtype=float)
    lhs = ch.h2d * ch.h2d * x2a / (ch.h1d * ch.h1d * x1a + ch.sigma1_sq)
    rhs = ch.h2e * ch.h2e * x2a / ch.sigma2_sq
    holds = lhs >= rhs
    return bool(holds) if np.ndim(holds) == 0 else holds


class C12ZeroReport(NamedTuple):
    upper: BoundReport
    lower: BoundReport
    coincide: bool


def c12_zero_bounds(ch: GaussianMacChannel, steps: Optional[int] = None,
                    refine_rounds: Optional[int] = None) -> C12ZeroReport:
    """
    Upper and lower bounds without a conference link. When the upper bound's
    maximizer satisfies c12_zero_condition the two coincide and give the
    secrecy capacity.
    """
    spec = _grid([0.0, 0.0], [ch.p1, ch.p2], steps, refine_rounds)

    def upper_objective(pts: np.ndarray) -> np.ndarray:
        return c12_zero_bound_value(ch, pts[:, 0], pts[:, 1])

    def lower_objective(pts: np.ndarray) -> np.ndarray:
        values = upper_objective(pts)
        return np.where(c12_zero_condition(ch, pts[:, 0], pts[:, 1]), values, -np.inf)

    up = maximize(upper_objective, spec, operation="c12_zero_upper")
    low = maximize(lower_objective, spec, operation="c12_zero_lower")

    coincide = bool(c12_zero_condition(ch, *up.argmax))
    if coincide and up.value > low.value:
        # The upper maximizer is itself feasible for the constrained problem.
        low = up

    names = ("x1", "x2")
    upper = BoundReport(value=up.value, argmax=up.argmax, argmax_names=names, raw_value=up.value)
    lower = BoundReport(value=low.value, argmax=low.argmax, argmax_names=names, raw_value=low.value)
    logger.info("Computed c12=0 bounds", extra={
        "operation": "c12_zero_bounds", "upper": upper.value, "lower": lower.value,
        "coincide": coincide,
    })
    return C12ZeroReport(upper=upper, lower=lower, coincide=coincide)


# ---------------------------------------------------------------------------
# Coincidence of the two bounds under full cooperation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CooperationReport:
    upper: BoundReport
    lower: BoundReport
    psi_star: float
    gap: float
    coincide: bool
    resolved: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "upper": self.upper.to_dict(),
            "lower": self.lower.to_dict(),
            "psi_star": self.psi_star,
            "gap": self.gap,
            "coincide": self.coincide,
            "resolved": self.resolved,
        }


def cooperation_coincidence(ch: GaussianMacChannel, tol: float = 1e-3,
                            steps: Optional[int] = None,
                            refine_rounds: Optional[int] = None) -> CooperationReport:
    """
    Compare the full-cooperation capacity with the lower bound at c12=INFINITE.

    The lower bound only reaches nonnegative input correlation, so the gap is
    flagged rather than asserted when the optimum needs psi < 0.
    """
    upper = full_cooperation_capacity(ch, steps, refine_rounds)
    lower = lower_bound(ch.with_c12(INFINITE), steps=steps, refine_rounds=refine_rounds)
    psi_star = upper.param("psi")
    # The objective is monotone in psi, so [0, 1] peaks at an endpoint.
    best_nonnegative = max(upper_bound_value(ch, 0.0), upper_bound_value(ch, 1.0))
    resolved = psi_star >= 0.0 or best_nonnegative >= upper.raw_value - 1e-12
    gap = upper.value - lower.value
    report = CooperationReport(
        upper=upper,
        lower=lower,
        psi_star=psi_star,
        gap=gap,
        coincide=abs(gap) <= tol,
        resolved=resolved,
    )
    if resolved and not report.coincide:
        logger.warning("Bounds differ although psi* is reachable", extra={"gap": gap})
    return report
