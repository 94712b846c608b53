# pipelines/sweep_pipeline.py
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from core.errors import NumericalDomainError
from core.gaussian import (
    GaussianMacChannel,
    NetworkGeometry,
    compile_geometry,
    lower_bound,
    upper_bound,
)
from core.numerics import cap, clamp_plus
from core.queue import EvaluationPool
from core.telemetry.metrics import metrics
from core.utils.logger import get_logger

logger = get_logger("SweepPipeline")

CSV_COLUMNS = [
    "d", "c12", "lower_bits", "upper_bits", "alpha_star", "beta_star",
    "noise_power_w", "conf_power_w", "wiretap_baseline_bits",
]
BASELINE_DISABLED = -1.0
NEAR_DESTINATION = (0.9, 1.1)
CONF_POWER_THRESHOLD = 0.05


def wiretap_baseline(ch: GaussianMacChannel) -> float:
    """Secrecy capacity of Encoder 1 alone over the scalar Gaussian wiretap channel."""
    return clamp_plus(
        cap(ch.h1d * ch.h1d * ch.p1 / ch.sigma1_sq) - cap(ch.h1e * ch.h1e * ch.p1 / ch.sigma2_sq)
    )


@dataclass(frozen=True)
class SweepConfig:
    """Encoder 2 moves along (d, enc2_y) for d on [start, stop]; pos_enc2 of the geometry is ignored."""
    geometry: NetworkGeometry = field(default_factory=NetworkGeometry)
    start: float = 0.0
    stop: float = 2.0
    step: float = 0.05
    c12_list: Tuple[float, ...] = (0.0, 1.0, 4.0, 6.0)
    include_wiretap_baseline: bool = True
    enc2_y: float = 0.0
    label: str = "sweep"

    def __post_init__(self):
        object.__setattr__(self, "c12_list", tuple(float(c) for c in self.c12_list))
        if not (math.isfinite(self.step) and self.step > 0):
            raise NumericalDomainError(f"sweep step must be > 0, got {self.step}")
        if not self.start <= self.stop:
            raise NumericalDomainError(f"sweep start {self.start} exceeds stop {self.stop}")
        if not self.c12_list:
            raise NumericalDomainError("c12_list must not be empty")
        for c in self.c12_list:
            if math.isnan(c) or c < 0:
                raise NumericalDomainError(f"c12 values must be >= 0 or INFINITE, got {c}")

    @classmethod
    def line_network(cls, c12_list: Sequence[float] = (0.0, 1.0, 4.0, 6.0),
                  reversed_roles: bool = False, **overrides: Any) -> "SweepConfig":
        geometry = NetworkGeometry.line_network()
        if reversed_roles:
            geometry = geometry.reversed_roles()
        label = "reversed" if reversed_roles else "forward"
        return cls(geometry=geometry, c12_list=tuple(c12_list), label=label, **overrides)

    def d_values(self) -> List[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return [round(self.start + k * self.step, 12) for k in range(count + 1)]


@dataclass(frozen=True)
class SweepRow:
    d: float
    c12: float
    lower_value: float
    upper_value: float
    alpha_star: float
    beta_star: float
    noise_power: float
    conf_power: float
    wiretap_baseline: float
    psi_star: float = 0.0

    def csv_record(self) -> Dict[str, float]:
        return dict(zip(CSV_COLUMNS, (
            self.d, self.c12, self.lower_value, self.upper_value, self.alpha_star,
            self.beta_star, self.noise_power, self.conf_power, self.wiretap_baseline,
        )))


@dataclass(frozen=True)
class PowerSplitEntry:
    d: float
    c12: float
    noise_power: float
    conf_power: float
    # None outside the near-destination window.
    no_conf_power: Optional[bool]


class SweepPipeline:
    """
    Encoder-2 location sweep:
    - compile the geometry at each d
    - upper bound once per d, lower bound per c12
    - rows sorted by (d, c12) whatever the worker schedule
    """

    def __init__(self, cfg: SweepConfig, steps: Optional[int] = None,
                 refine_rounds: Optional[int] = None, threads: Optional[int] = None) -> None:
        self.cfg = cfg
        self.steps = steps
        self.refine_rounds = refine_rounds
        self.threads = threads

    def _rows_at(self, d: float) -> List[SweepRow]:
        cfg = self.cfg
        ch = compile_geometry(cfg.geometry.with_enc2(d, cfg.enc2_y))
        upper = upper_bound(ch, self.steps, self.refine_rounds)
        baseline = wiretap_baseline(ch) if cfg.include_wiretap_baseline else BASELINE_DISABLED

        rows = []
        hints: List[Tuple[float, float]] = []
        # Ascending c12 with earlier maximizers as hints keeps the lower bound monotone.
        for c12 in sorted(cfg.c12_list):
            lower = lower_bound(ch.with_c12(c12), steps=self.steps,
                                refine_rounds=self.refine_rounds, hints=hints)
            hints.append(lower.argmax)
            alpha, beta = lower.argmax
            rows.append(SweepRow(
                d=d,
                c12=c12,
                lower_value=lower.value,
                upper_value=upper.value,
                alpha_star=alpha,
                beta_star=beta,
                noise_power=lower.noise_power,
                conf_power=lower.conf_power,
                wiretap_baseline=baseline,
                psi_star=upper.param("psi"),
            ))
        return rows

    def run(self) -> List[SweepRow]:
        started = time.perf_counter()
        d_values = self.cfg.d_values()
        with EvaluationPool(self.threads) as pool:
            per_d = pool.map_ordered(self._rows_at, d_values)

        rows = sorted((row for batch in per_d for row in batch), key=lambda r: (r.d, r.c12))
        metrics.record_sweep_rows(self.cfg.label, len(rows))
        metrics.record_duration("run_sweep", time.perf_counter() - started)
        logger.info("Sweep finished", extra={
            "geometry": self.cfg.label, "rows": len(rows), "d_points": len(d_values),
            "elapsed": round(time.perf_counter() - started, 6),
        })
        return rows


def run_sweep(cfg: SweepConfig, steps: Optional[int] = None, refine_rounds: Optional[int] = None,
              threads: Optional[int] = None) -> List[SweepRow]:
    return SweepPipeline(cfg, steps, refine_rounds, threads).run()


def power_split_report(rows: Sequence[SweepRow],
                       window: Tuple[float, float] = NEAR_DESTINATION,
                       threshold: float = CONF_POWER_THRESHOLD) -> List[PowerSplitEntry]:
    """
    Encoder 2's split between noise and conferenced signal. Inside the open
    `window` each entry records whether conferenced power stays below
    `threshold` times P2.
    """
    lo, hi = window
    out = []
    for row in rows:
        flag = None
        if lo < row.d < hi:
            p2 = row.noise_power + row.conf_power
            flag = row.conf_power < threshold * p2
        out.append(PowerSplitEntry(row.d, row.c12, row.noise_power, row.conf_power, flag))
    return out


def rows_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.csv_record() for row in rows], columns=CSV_COLUMNS)


def with_p2(cfg: SweepConfig, p2: float) -> SweepConfig:
    return replace(cfg, geometry=replace(cfg.geometry, p2=p2))
