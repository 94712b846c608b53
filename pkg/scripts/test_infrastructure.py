import json
import logging
import math
import os

import pandas as pd
import pytest

from core.config import Settings
from core.errors import (
    ErrorCode,
    InfeasibleProblemError,
    LatticeBudgetExceeded,
    NumericalDomainError,
    ProbabilityTableError,
    classify,
)
from core.queue import EvaluationPool, chunked, resolve_workers
from core.telemetry.metrics import PROMETHEUS_AVAILABLE, metrics
from core.utils.logger import ExtrasFormatter, JSONFormatter
from observability.report_store import ReportStore, dumps, to_plain, write_sweep
from pipelines.sweep_pipeline import CSV_COLUMNS


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("SECMAC_THREADS", "3")
    monkeypatch.setenv("SECMAC_GRID_STEPS", "77")
    fresh = Settings()
    assert fresh.THREADS == 3
    assert fresh.GRID_STEPS == 77
    assert fresh.APP_NAME == "SECMAC"


def test_resolve_workers():
    assert resolve_workers(3) == 3
    assert resolve_workers(0) == (os.cpu_count() or 1)
    with pytest.raises(ValueError):
        resolve_workers(-1)


@pytest.mark.parametrize("workers", [1, 4])
def test_pool_keeps_input_order(workers):
    with EvaluationPool(workers) as pool:
        assert pool.map_ordered(lambda x: x * x, range(50)) == [x * x for x in range(50)]


def test_chunked():
    assert chunked([1, 2, 3, 4, 5], 2) == [[1, 2], [3, 4], [5]]
    assert chunked([], 3) == []


def _record(**extra):
    record = logging.LogRecord("SecmacTest", logging.INFO, __file__, 1, "Computed bound", (), None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


def test_json_formatter_carries_extras():
    data = json.loads(JSONFormatter().format(_record(operation="upper_bound", value=0.5)))
    assert data["message"] == "Computed bound"
    assert data["level"] == "INFO"
    assert data["logger"] == "SecmacTest"
    assert (data["operation"], data["value"]) == ("upper_bound", 0.5)
    assert data["timestamp"].endswith("Z")


def test_extras_formatter_appends_key_values():
    line = ExtrasFormatter("%(levelname)s %(message)s").format(_record(rows=4))
    assert line == "INFO Computed bound rows=4"


@pytest.mark.parametrize("exc,code", [
    (NumericalDomainError("bad"), ErrorCode.SCHEMA),
    (ProbabilityTableError("law", (0, 1), "sums to 0.9"), ErrorCode.SCHEMA),
    (LatticeBudgetExceeded(81, 10), ErrorCode.BUDGET),
    (InfeasibleProblemError("none"), ErrorCode.VIOLATION),
    (RuntimeError("boom"), ErrorCode.VIOLATION),
])
def test_classify(exc, code):
    report = classify(exc)
    assert report.code is code
    assert report.details == type(exc).__name__


def test_probability_error_names_the_row():
    assert str(ProbabilityTableError("law", (0, 1), "sums to 0.9")) == "law row (0, 1): sums to 0.9"
    assert str(ProbabilityTableError("p_u", None, "entries must be finite")) == "p_u: entries must be finite"


def test_metrics_summary():
    metrics.record_evaluations("test_metrics", 5)
    summary = metrics.get_metrics_summary()
    assert "secmac_objective_evaluations_total" in summary
    assert summary["secmac_worker_threads"]["type"] == "gauge"
    if PROMETHEUS_AVAILABLE:
        assert "secmac_sweep_rows" in metrics.export_prometheus()


# ---------------------------------------------------------------------------
# Report store
# ---------------------------------------------------------------------------

def test_dumps_is_stable():
    text = dumps({"b": math.inf, "a": 1.0 / 3.0, "c": [True, 2, -math.inf, math.nan]})
    assert text.endswith("}\n")
    assert json.loads(text) == {"a": 0.333333333, "b": "inf", "c": [True, 2, "-inf", "nan"]}
    assert text.index('"a"') < text.index('"b"')


def test_to_plain_handles_dataclasses_and_enums():
    assert to_plain(ErrorCode.BUDGET) == 3
    assert to_plain(classify(LatticeBudgetExceeded(81, 10))) == {
        "code": 3,
        "message": "lattice of 81 cells exceeds the evaluation budget of 10",
        "details": "LatticeBudgetExceeded",
    }


def _frame():
    rows = [
        [0.0, 0.0, 0.5, 1.0, 1.0, 1.0, 1.0, 0.0, 0.469507],
        [0.0, math.inf, 1.0 / 3.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.469507],
        [0.5, 0.0, 0.7, 1.2, 1.0, 1.0, 1.0, 0.0, 0.469507],
        [0.5, math.inf, 1.1, 1.2, 0.0, 0.0, 0.0, 1.0, 0.469507],
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def test_csv_is_written_with_nine_digits(tmp_path):
    path = ReportStore(str(tmp_path / "run")).write_csv("sweep", _frame())
    assert path.name == "run.sweep.csv"
    lines = path.read_text(encoding="utf-8").split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[2].startswith("0,inf,0.333333333,")
    assert lines[-1] == ""


def test_svg_figures_are_deterministic(tmp_path):
    first = write_sweep(ReportStore(str(tmp_path / "a" / "run")), _frame(), svg=True)
    second = write_sweep(ReportStore(str(tmp_path / "b" / "run")), _frame(), svg=True)
    assert [p.name for p in first] == ["run.sweep.csv", "run.sweep.bounds.svg", "run.sweep.power.svg"]
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()
