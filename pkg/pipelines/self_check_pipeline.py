# pipelines/self_check_pipeline.py
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from core.dm import (
    AuxCardinalities,
    FrontierBound,
    InnerAuxDistribution,
    OuterAuxDistribution,
    conditional_mi,
    eavesdropper_copy,
    enumerate_frontier,
    inner_bound_point,
    outer_bound_point,
    random_channel,
)
from core.dm.information import brute_force_mi
from core.gaussian import (
    INFINITE,
    GaussianMacChannel,
    lower_bound,
    upper_bound,
    upper_bound_value,
)
from core.utils.logger import get_logger
from pipelines.sweep_pipeline import wiretap_baseline

logger = get_logger("SelfCheck")

# Resolution used by the self-check so the whole suite stays interactive.
_STEPS = 51
_ROUNDS = 3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def gaussian_mi_oracle(ch: GaussianMacChannel, psi: float) -> float:
    """
    I(X1,X2;Y) - I(X1,X2;Z) from covariance determinants, in the cap()
    convention (log2, no 1/2 factor): for S = h.X and output S + N,
    I = log2(var S * var Y / det Cov(S, Y)).
    """
    k_p = np.array([[ch.p1, psi * math.sqrt(ch.p1 * ch.p2)],
                    [psi * math.sqrt(ch.p1 * ch.p2), ch.p2]])

    def mi(h: np.ndarray, noise: float) -> float:
        var_s = float(h @ k_p @ h)
        if var_s <= 1e-300:
            return 0.0
        cov = np.array([[var_s, var_s], [var_s, var_s + noise]])
        return math.log2(var_s * (var_s + noise) / np.linalg.det(cov))

    return (mi(np.array([ch.h1d, ch.h2d]), ch.sigma1_sq)
            - mi(np.array([ch.h1e, ch.h2e]), ch.sigma2_sq))


def random_gaussian_channel(rng: np.random.Generator, signed: bool = True) -> GaussianMacChannel:
    gains = rng.normal(size=4) if signed else rng.uniform(0.05, 2.0, size=4)
    return GaussianMacChannel(
        h1d=float(gains[0]), h2d=float(gains[1]), h1e=float(gains[2]), h2e=float(gains[3]),
        sigma1_sq=float(rng.uniform(0.2, 2.0)), sigma2_sq=float(rng.uniform(0.2, 2.0)),
        p1=float(rng.uniform(0.0, 3.0)), p2=float(rng.uniform(0.0, 3.0)),
        c12=float(rng.uniform(0.0, 4.0)),
    )


def random_joint(rng: np.random.Generator, max_card: int = 4, n_vars: int = 3) -> np.ndarray:
    shape = tuple(int(s) for s in rng.integers(1, max_card + 1, size=n_vars))
    table = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
    return table


def random_inner(rng: np.random.Generator, n_x1: int, n_x2: int, n_u: int = 2, n_v: int = 2,
                 n_v1: int = 2, n_v2: int = 2) -> InnerAuxDistribution:
    def rows(*shape):
        return rng.dirichlet(np.ones(shape[-1]), size=shape[:-1]) if len(shape) > 1 else rng.dirichlet(np.ones(shape[0]))

    return InnerAuxDistribution(
        p_u=rows(n_u), p_v_u=rows(n_u, n_v), p_v1=rows(n_u, n_v, n_v1), p_v2=rows(n_u, n_v, n_v2),
        p_x1=rows(n_v1, n_x1), p_x2=rows(n_v2, n_x2),
    )


def random_outer(rng: np.random.Generator, n_x1: int, n_x2: int, n_u: int = 2, n_v1: int = 2,
                 n_v2: int = 2) -> OuterAuxDistribution:
    return OuterAuxDistribution(
        p_u=rng.dirichlet(np.ones(n_u)),
        p_v1v2_u=rng.dirichlet(np.ones(n_v1 * n_v2), size=n_u).reshape(n_u, n_v1, n_v2),
        p_x1x2=rng.dirichlet(np.ones(n_x1 * n_x2), size=(n_v1, n_v2)).reshape(n_v1, n_v2, n_x1, n_x2),
    )


class SelfCheckPipeline:
    """Invariant suites on internally sampled channels and distributions."""

    def __init__(self, seed: int = 0, samples: int = 20) -> None:
        self.seed = seed
        self.samples = samples

    def _rng(self, offset: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, offset])

    def check_mi_engine(self) -> CheckResult:
        rng = self._rng(1)
        worst = 0.0
        for _ in range(self.samples * 10):
            table = random_joint(rng)
            worst = max(worst, abs(conditional_mi(table, [0], [1], [2]) - brute_force_mi(table, [0], [1], [2])))
        return CheckResult("mi_vs_brute_force", worst <= 1e-12, f"max error {worst:.3g}")

    def check_chain_rule(self) -> CheckResult:
        rng = self._rng(2)
        worst = 0.0
        for _ in range(self.samples * 10):
            table = random_joint(rng)
            lhs = conditional_mi(table, [0, 1], [2])
            rhs = conditional_mi(table, [0], [2]) + conditional_mi(table, [1], [2], [0])
            worst = max(worst, abs(lhs - rhs))
        return CheckResult("chain_rule", worst <= 1e-12, f"max error {worst:.3g}")

    def check_upper_closed_form(self) -> CheckResult:
        rng = self._rng(3)
        worst = 0.0
        for _ in range(self.samples * 5):
            ch = random_gaussian_channel(rng)
            psi = float(rng.uniform(-1.0, 1.0))
            worst = max(worst, abs(upper_bound_value(ch, psi) - gaussian_mi_oracle(ch, psi)))
        return CheckResult("upper_vs_covariance_oracle", worst <= 1e-9, f"max error {worst:.3g}")

    def check_snr_invariance(self) -> CheckResult:
        rng = self._rng(4)
        worst = 0.0
        for _ in range(max(self.samples // 4, 1)):
            ch = random_gaussian_channel(rng)
            scaled = ch.scaled(float(rng.uniform(0.3, 3.0)))
            worst = max(worst, abs(upper_bound(ch, _STEPS, _ROUNDS).value
                                   - upper_bound(scaled, _STEPS, _ROUNDS).value))
            worst = max(worst, abs(lower_bound(ch, steps=_STEPS, refine_rounds=_ROUNDS).value
                                   - lower_bound(scaled, steps=_STEPS, refine_rounds=_ROUNDS).value))
        return CheckResult("snr_invariance", worst <= 1e-9, f"max difference {worst:.3g}")

    def check_lower_below_upper(self) -> CheckResult:
        rng = self._rng(5)
        worst = -math.inf
        for _ in range(max(self.samples // 2, 1)):
            ch = random_gaussian_channel(rng)
            gap = (lower_bound(ch, steps=_STEPS, refine_rounds=_ROUNDS).value
                   - upper_bound(ch, _STEPS, _ROUNDS).value)
            worst = max(worst, gap)
        return CheckResult("lower_le_upper", worst <= 1e-3, f"max lower-upper {worst:.3g}")

    def check_lower_monotone_in_c12(self) -> CheckResult:
        rng = self._rng(6)
        worst = -math.inf
        for _ in range(max(self.samples // 4, 1)):
            ch = random_gaussian_channel(rng)
            values, hints = [], []
            for c in (0.0, 0.5, 2.0, INFINITE):
                report = lower_bound(ch.with_c12(c), steps=_STEPS, refine_rounds=_ROUNDS, hints=hints)
                values.append(report.value)
                hints.append(report.argmax)
            worst = max(worst, max(a - b for a, b in zip(values, values[1:])))
        return CheckResult("lower_monotone_in_c12", worst <= 1e-9, f"max decrease {worst:.3g}")

    def check_wiretap_reduction(self) -> CheckResult:
        rng = self._rng(7)
        worst = 0.0
        for _ in range(max(self.samples // 4, 1)):
            ch = random_gaussian_channel(rng).with_powers(float(rng.uniform(0.1, 3.0)), 0.0)
            worst = max(worst, abs(lower_bound(ch, steps=_STEPS, refine_rounds=_ROUNDS).value
                                   - wiretap_baseline(ch)))
        return CheckResult("p2_zero_wiretap_reduction", worst <= 1e-9, f"max error {worst:.3g}")

    def check_inner_cap(self) -> CheckResult:
        rng = self._rng(8)
        violations = 0
        for _ in range(self.samples * 2):
            ch = random_channel(rng, 2, 2, 2, 2)
            point = inner_bound_point(random_inner(rng, 2, 2), ch, float(rng.uniform(0, 2)))
            violations += point.re > point.r
        return CheckResult("inner_re_le_r", violations == 0, f"{violations} violations")

    def check_leaky_outer(self) -> CheckResult:
        rng = self._rng(9)
        worst = 0.0
        for _ in range(self.samples * 2):
            p_y = rng.dirichlet(np.ones(2), size=(2, 2))
            ch = eavesdropper_copy(p_y)
            worst = max(worst, outer_bound_point(random_outer(rng, 2, 2), ch, float(rng.uniform(0, 2))).re)
        return CheckResult("y_equals_z_outer_zero", worst <= 1e-12, f"max re {worst:.3g}")

    def check_inner_within_outer(self) -> CheckResult:
        rng = self._rng(10)
        cards = AuxCardinalities(n_u=1, n_v=1, identity_prefix=True)
        step = 0.125
        misses = 0
        for _ in range(max(self.samples // 5, 1)):
            ch = random_channel(rng, 2, 2, 2, 2)
            inner = enumerate_frontier(ch, 0.5, FrontierBound.INNER, cards=cards, grid_step=step)
            outer = enumerate_frontier(ch, 0.5, FrontierBound.OUTER, cards=cards, grid_step=step)
            for p in inner.points:
                if not any(q.dominates(p, tol=2 * step) for q in outer.points):
                    misses += 1
        return CheckResult("inner_within_outer", misses == 0, f"{misses} undominated inner points")

    def suites(self) -> List[Callable[[], CheckResult]]:
        return [
            self.check_mi_engine,
            self.check_chain_rule,
            self.check_upper_closed_form,
            self.check_snr_invariance,
            self.check_lower_below_upper,
            self.check_lower_monotone_in_c12,
            self.check_wiretap_reduction,
            self.check_inner_cap,
            self.check_leaky_outer,
            self.check_inner_within_outer,
        ]

    def run(self) -> List[CheckResult]:
        results = []
        for suite in self.suites():
            started = time.perf_counter()
            result = suite()
            results.append(result)
            log = logger.info if result.passed else logger.error
            log("Self-check suite finished", extra={
                "suite": result.name, "passed": result.passed, "detail": result.detail,
                "elapsed": round(time.perf_counter() - started, 6),
            })
        return results


def run_self_check(seed: int = 0, samples: int = 20) -> List[CheckResult]:
    return SelfCheckPipeline(seed, samples).run()
