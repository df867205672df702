"""Trace derivations must reproduce the walkthrough arithmetic exactly."""

from fractions import Fraction

import pytest

from spendtrace import Ledger
from spendtrace.casestudy import (
    CHEST_BASIS,
    CHEST_EVENT_ID,
    WIZARDS_BASIS,
    WIZARDS_EVENT_ID,
    case_study_lines,
)
from spendtrace.errors import UnknownAttribution
from spendtrace.ingest import ingest_lines
from spendtrace.trace import build_trace

from oracles import UnitOracle, random_log
from spendtrace.model import Strategy


@pytest.fixture()
def case_study_ledger():
    ledger = Ledger("demo")
    report = ingest_lines(case_study_lines(), ledger)
    assert report.accepted == 6 and not report.rejected
    return ledger


def test_chest_trace_two_steps(case_study_ledger):
    trace = build_trace(case_study_ledger, CHEST_EVENT_ID)
    assert len(trace.steps) == 2
    assert [s.term for s in trace.steps] == ["250/2500", "19.99"]
    assert trace.steps[0].rate == Fraction(250, 2500)
    assert trace.steps[1].rate == Fraction(1999, 100)
    assert trace.steps[-1].running_product == CHEST_BASIS == trace.total
    assert trace.rendered_arithmetic == "250/2500 × 19.99 = 1.99"


def test_wizard_trace_three_steps(case_study_ledger):
    trace = build_trace(case_study_ledger, WIZARDS_EVENT_ID)
    assert [s.term for s in trace.steps] == ["800/1000", "60", "19.99/2500"]
    assert [s.rate for s in trace.steps] == [
        Fraction(800, 1000), Fraction(60), Fraction(1999, 250000)]
    assert trace.steps[-1].running_product == WIZARDS_BASIS == trace.total
    assert trace.rendered_arithmetic == "800/1000 × 60 × 19.99/2500 = 0.38"


def test_grant_funded_item_single_earned_step():
    ledger = Ledger("demo")
    lines = [
        '{"type":"grant","event_id":"g1","app_id":"demo","ts":"2024-05-12T09:00:00Z",'
        '"received":{"code":"gems","units":500},"reason":"quest"}',
        '{"type":"item_purchase","event_id":"g2","app_id":"demo","ts":"2024-05-12T09:01:00Z",'
        '"item_id":"hat","count":1,"paid_with":[{"code":"gems","units":200}]}',
    ]
    assert ingest_lines(lines, ledger).accepted == 2
    trace = build_trace(ledger, "g2")
    assert len(trace.steps) == 1
    assert "earned" in trace.steps[0].description
    assert "$0.00" in trace.steps[0].description
    assert trace.total == 0


def test_mixed_lot_purchase_one_segment_per_lot_totals_sum():
    ledger = Ledger("demo")
    lines = [
        '{"type":"item_sale","event_id":"m1","app_id":"demo","ts":"2024-05-12T09:00:00Z",'
        '"item_id":"old","count":1,"proceeds":{"code":"gems","units":100}}',
        '{"type":"real_purchase","event_id":"m2","app_id":"demo","ts":"2024-05-12T09:01:00Z",'
        '"paid":{"amount":"1.50","currency":"USD"},"received":{"code":"gems","units":150}}',
        '{"type":"item_purchase","event_id":"m3","app_id":"demo","ts":"2024-05-12T09:02:00Z",'
        '"item_id":"big","count":1,"paid_with":[{"code":"gems","units":250}]}',
    ]
    assert ingest_lines(lines, ledger).accepted == 3
    trace = build_trace(ledger, "m3")
    assert len(trace.segments) == 2
    assert sum((seg.subtotal for seg in trace.segments), Fraction(0)) == trace.total
    assert trace.total == Fraction(3, 2)
    assert " + " in trace.rendered_arithmetic


def test_unknown_attribution_raises(case_study_ledger):
    with pytest.raises(UnknownAttribution):
        build_trace(case_study_ledger, "nope")


@pytest.mark.parametrize("strategy", [Strategy.FIFO, Strategy.LIFO])
@pytest.mark.parametrize("seed", range(12))
def test_segment_subtotals_match_unit_provenance_oracle(seed, strategy):
    events = random_log(seed, n_events=10, max_qty=60)
    ledger = Ledger("t", strategy=strategy)
    oracle = UnitOracle(strategy)
    for event in events:
        ledger.apply(event)
        oracle.apply(event)
    for event_id, attribution in ledger.attributions.items():
        trace = build_trace(ledger, event_id)
        assert sum((seg.subtotal for seg in trace.segments), Fraction(0)) \
            == oracle.attributions[event_id]
        for segment in trace.segments:
            assert segment.steps[-1].running_product == segment.subtotal
