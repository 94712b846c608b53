import math

import pytest

from core.errors import NumericalDomainError
from core.gaussian import INFINITE
from pipelines.self_check_pipeline import run_self_check
from pipelines.sweep_pipeline import (
    BASELINE_DISABLED,
    CSV_COLUMNS,
    SweepConfig,
    SweepRow,
    power_split_report,
    rows_frame,
    run_sweep,
    with_p2,
)

STEPS = 51
ROUNDS = 3


def test_d_values_cover_the_closed_range():
    cfg = SweepConfig.line_network()
    d = cfg.d_values()
    assert len(d) == 41
    assert d[0] == 0.0 and d[-1] == 2.0
    assert d[18] == 0.9


def test_single_point_sweep_has_one_row_per_c12():
    cfg = SweepConfig.line_network(start=0.5, stop=0.5)
    rows = run_sweep(cfg, STEPS, ROUNDS, threads=1)
    assert [r.c12 for r in rows] == [0.0, 1.0, 4.0, 6.0]
    assert all(r.d == 0.5 for r in rows)


@pytest.mark.parametrize("overrides", [
    {"step": 0.0},
    {"step": -0.05},
    {"start": 1.0, "stop": 0.5},
    {"c12_list": ()},
    {"c12_list": (1.0, -2.0)},
])
def test_sweep_config_validation(overrides):
    with pytest.raises(NumericalDomainError):
        SweepConfig.line_network(**overrides)


def test_rows_are_sorted_whatever_the_c12_order():
    cfg = SweepConfig.line_network(c12_list=(4.0, 0.0, 1.0), start=0.0, stop=0.2, step=0.1)
    rows = run_sweep(cfg, STEPS, ROUNDS, threads=2)
    keys = [(r.d, r.c12) for r in rows]
    assert keys == sorted(keys)
    assert len(rows) == 9


def test_rows_are_monotone_in_c12_and_below_upper():
    cfg = SweepConfig.line_network(c12_list=(0.0, 1.0, 4.0, 6.0, INFINITE), start=0.0, stop=2.0, step=0.25)
    rows = run_sweep(cfg, STEPS, ROUNDS, threads=1)
    by_d = {}
    for row in rows:
        by_d.setdefault(row.d, []).append(row)
    for batch in by_d.values():
        values = [r.lower_value for r in batch]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        assert all(r.lower_value <= r.upper_value + 1e-3 for r in batch)
        assert all(r.noise_power + r.conf_power == pytest.approx(1.0) for r in batch)


def test_silent_helper_reduces_to_wiretap_baseline():
    cfg = with_p2(SweepConfig.line_network(c12_list=(0.0, 4.0), start=0.2, stop=1.8, step=0.4), 0.0)
    for row in run_sweep(cfg, 101, 4, threads=1):
        assert row.lower_value == pytest.approx(row.wiretap_baseline, abs=1e-9)
        assert row.noise_power == 0.0 and row.conf_power == 0.0


def test_baseline_can_be_disabled():
    cfg = SweepConfig.line_network(c12_list=(0.0,), start=0.5, stop=0.5, include_wiretap_baseline=False)
    assert run_sweep(cfg, STEPS, ROUNDS, threads=1)[0].wiretap_baseline == BASELINE_DISABLED


def test_sweep_is_independent_of_worker_count():
    cfg = SweepConfig.line_network(start=0.0, stop=1.0, step=0.25)
    assert run_sweep(cfg, STEPS, ROUNDS, threads=1) == run_sweep(cfg, STEPS, ROUNDS, threads=4)


def test_rows_frame_columns():
    cfg = SweepConfig.line_network(c12_list=(0.0, INFINITE), start=0.5, stop=0.5)
    frame = rows_frame(run_sweep(cfg, STEPS, ROUNDS, threads=1))
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 2
    assert math.isinf(frame["c12"].iloc[-1])


def _row(d, noise, conf):
    return SweepRow(d=d, c12=1.0, lower_value=0.5, upper_value=1.0, alpha_star=1.0, beta_star=noise,
                    noise_power=noise, conf_power=conf, wiretap_baseline=0.0)


def test_power_split_flags_only_inside_the_window():
    entries = power_split_report([_row(0.9, 0.5, 0.5), _row(1.0, 0.99, 0.01), _row(1.05, 0.5, 0.5)])
    assert [e.no_conf_power for e in entries] == [None, True, False]
    assert entries[1].conf_power == 0.01


def test_no_conferenced_power_at_the_destination():
    cfg = SweepConfig.line_network(start=1.0, stop=1.0)
    entries = power_split_report(run_sweep(cfg, threads=1))
    assert len(entries) == 4
    assert all(e.no_conf_power is True for e in entries)


@pytest.mark.slow
def test_line_network_sweep():
    rows = run_sweep(SweepConfig.line_network())
    assert len(rows) == 41 * 4
    by_d = {}
    for row in rows:
        by_d.setdefault(row.d, {})[row.c12] = row
        assert row.lower_value <= row.upper_value + 1e-3
    for batch in by_d.values():
        values = [batch[c].lower_value for c in (0.0, 1.0, 4.0, 6.0)]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        assert batch[6.0].lower_value >= batch[0.0].lower_value
    window = [e for e in power_split_report(rows) if e.no_conf_power is not None]
    assert len(window) == 3 * 4
    assert all(e.no_conf_power for e in window)


@pytest.mark.slow
def test_reversed_roles_still_give_positive_secrecy():
    rows = run_sweep(SweepConfig.line_network(c12_list=(6.0,), reversed_roles=True))
    assert max(r.lower_value for r in rows) > 0.01


def test_self_check_passes():
    results = run_self_check(seed=0, samples=5)
    assert len(results) == 10
    assert [r.name for r in results if not r.passed] == []
