"""
Deterministic persistence of reports: JSON documents, CSV tables and SVG figures.

Identical inputs produce byte-identical files. Floats are written with nine
significant digits, infinities as the strings "inf" / "-inf".
"""
import json
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Optional

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from core.config import settings  # noqa: E402
from core.utils.logger import get_logger  # noqa: E402

logger = get_logger("ReportStore")

FLOAT_FORMAT = "%.9g"


def to_plain(obj: Any) -> Any:
    """Convert a report tree into JSON-safe values with rounded floats."""
    if isinstance(obj, Enum):
        return to_plain(obj.value)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(FLOAT_FORMAT % value)
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


class ReportStore:
    """Writes `<prefix>.<name>.<ext>` files, creating the parent directory."""

    def __init__(self, prefix: Optional[str] = None):
        self.prefix = prefix or settings.OUTPUT_PREFIX

    def path(self, name: str, ext: str) -> Path:
        target = Path(f"{self.prefix}.{name}.{ext}")
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def write_json(self, name: str, obj: Any) -> Path:
        target = self.path(name, "json")
        target.write_text(dumps(obj), encoding="utf-8")
        logger.info("Report written", extra={"path": str(target), "format": "json"})
        return target

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        target = self.path(name, "csv")
        frame.to_csv(target, index=False, float_format=FLOAT_FORMAT,
                     encoding="utf-8", lineterminator="\n")
        logger.info("Report written", extra={
            "path": str(target), "format": "csv", "rows": len(frame),
        })
        return target

    def write_svg(self, name: str, figure: Figure) -> Path:
        target = self.path(name, "svg")
        with rc_context({"svg.hashsalt": settings.SVG_HASH_SALT, "svg.fonttype": "path"}):
            figure.savefig(target, format="svg", metadata={"Date": None})
        logger.info("Report written", extra={"path": str(target), "format": "svg"})
        return target


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------

def _c12_label(c12: float) -> str:
    return "C12=inf" if math.isinf(c12) else f"C12={c12:g}"


def _by_c12(frame: pd.DataFrame) -> Iterable[tuple]:
    for c12 in sorted(frame["c12"].unique()):
        yield float(c12), frame[frame["c12"] == c12].sort_values("d")


def bounds_figure(frame: pd.DataFrame, title: str = "") -> Figure:
    """Upper bound, lower bound per c12, and the wiretap baseline against d."""
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.add_subplot(1, 1, 1)
    first = frame[frame["c12"] == frame["c12"].min()].sort_values("d")
    ax.plot(first["d"], first["upper_bits"], color="black", linewidth=1.5, label="upper")
    for c12, part in _by_c12(frame):
        ax.plot(part["d"], part["lower_bits"], linestyle="--", label=f"lower {_c12_label(c12)}")
    baseline = first["wiretap_baseline_bits"]
    if (baseline >= 0).all():
        ax.plot(first["d"], baseline, color="gray", linestyle=":", label="wiretap")
    ax.set_xlabel("d")
    ax.set_ylabel("secrecy rate [bits]")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize="small")
    return fig


def power_split_figure(frame: pd.DataFrame, title: str = "") -> Figure:
    """Encoder 2's noise and conferenced power at the lower-bound maximizer."""
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.add_subplot(1, 1, 1)
    for c12, part in _by_c12(frame):
        line, = ax.plot(part["d"], part["noise_power_w"], label=f"noise {_c12_label(c12)}")
        ax.plot(part["d"], part["conf_power_w"], linestyle="--", color=line.get_color(),
                label=f"conf {_c12_label(c12)}")
    ax.set_xlabel("d")
    ax.set_ylabel("power [W]")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize="small")
    return fig


def write_sweep(store: ReportStore, frame: pd.DataFrame, name: str = "sweep",
                svg: bool = False) -> List[Path]:
    paths = [store.write_csv(name, frame)]
    if svg:
        paths.append(store.write_svg(f"{name}.bounds", bounds_figure(frame, name)))
        paths.append(store.write_svg(f"{name}.power", power_split_figure(frame, name)))
    return paths

