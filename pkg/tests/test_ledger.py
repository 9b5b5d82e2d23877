from fractions import Fraction

import numpy as np

from fastseries import (
    BlockPlan,
    CostLedger,
    EXPECTED_STAGE_UNITS,
    multiply,
    report_kv,
    report_text,
    stage_table,
)


def test_unit_rule():
    led = CostLedger()
    k = 8
    led.record_dft(3 * k, stage="s", label="x")
    assert led.units_total(k) == 3
    led.record_dft(k, stage="s")
    assert led.units_total(k) == 4
    led.record_dft(2 * k, stage="s")
    assert led.units_total(k) == 6


def test_additivity_and_filtering():
    led = CostLedger()
    led.record_dft(8, stage="a", label="x")
    led.record_dft(8, stage="a", label="x")
    led.record_dft(16, stage="b", label="y")
    assert led.units_for(8, stage="a") == 2
    assert led.units_for(8, label="y") == 2
    assert led.event_count(stage="a", label="x") == 2


def test_fractional_units_are_exact():
    led = CostLedger()
    led.record_dft(12, stage="s")
    assert led.units_total(8) == Fraction(3, 2)


def test_stage_scoping():
    led = CostLedger()
    with led.stage("outer"):
        led.record_dft(4)
        with led.stage("inner"):
            led.record_dft(4)
        led.record_dft(4)
    assert led.units_for(4, stage="outer") == 2
    assert led.units_for(4, stage="inner") == 1


def test_merge_is_associative_and_commutative_on_totals():
    def make(orders, stage):
        led = CostLedger()
        for o in orders:
            led.record_dft(o, stage=stage)
        led.add_scalar("cmul", len(orders))
        return led

    a = make([4, 8], "a")
    b = make([12], "b")
    c = make([4, 4, 4], "c")
    left = a.merge(b).merge(c)
    right = a.merge(b.merge(c))
    swapped = c.merge(b).merge(a)
    for k in (2, 4):
        assert left.units_total(k) == right.units_total(k) == swapped.units_total(k)
    assert left.scalar == right.scalar == swapped.scalar


def test_bootstrap_exclusion():
    led = CostLedger()
    led.record_dft(8, stage="bootstrap.E")
    led.record_dft(8, stage="exp.stage1")
    assert led.units_total(8, include_bootstrap=False) == 1
    assert led.units_total(8) == 2


def test_multiply_records_three_events_of_one_order():
    led = CostLedger()
    rng = np.random.default_rng(0)
    multiply(rng.standard_normal(20), rng.standard_normal(13), ledger=led)
    orders = [ev.order for ev in led.events]
    assert len(orders) == 3 and len(set(orders)) == 1 and orders[0] >= 32


def test_report_rows_and_expected_constants():
    plan = BlockPlan(k=4, n=8, m=32)
    led = CostLedger()
    with led.stage("exp.stage1"):
        led.record_dft(8, label="f")
        led.record_dft(4, label="f")
    rows = stage_table(led, plan)
    assert [r.stage for r in rows] == ["exp.stage1"]
    assert rows[0].expected == EXPECTED_STAGE_UNITS["exp.stage1"] == 13.0
    assert rows[0].units == 3
    assert rows[0].per_mk == 3 / 8

    text = report_text(led, plan)
    assert "exp.stage1" in text and "plan k=4" in text
    kv = report_kv(led, plan)
    assert "stage.exp.stage1.units=3" in kv
    assert "total.main.units=3" in kv


def test_empty_ledger_reports_zero_table():
    plan = BlockPlan(k=4, n=8, m=32)
    led = CostLedger()
    assert stage_table(led, plan) == []
    led.touch_stage("exp.stage1")
    rows = stage_table(led, plan)
    assert len(rows) == 1 and rows[0].units == 0


def test_boundary_inverse_note():
    plan = BlockPlan(k=4, n=8, m=32)
    led = CostLedger()
    with led.stage("exp.log"):
        led.record_dft(8, label="u-boundary")
        led.record_dft(4, label="u-boundary")
    kv = report_kv(led, plan)
    assert "note.boundary_inverse.units=3" in kv
    assert "note.boundary_inverse.units_if_2k=2" in kv
