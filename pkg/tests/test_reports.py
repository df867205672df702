"""Per-currency and date-bucketed reports."""

from datetime import date, timedelta
from fractions import Fraction

import pytest

from spendtrace import Ledger
from spendtrace.casestudy import case_study_lines
from spendtrace.errors import InvalidDateRange
from spendtrace.ingest import ingest_lines
from spendtrace.reports import (
    DateRange,
    build_report_document,
    format_tz_offset,
    parse_tz_offset,
    render_json,
    report_by_date,
    report_spend_by_currency,
)

from oracles import random_log
from spendtrace.model import RealMoneyPurchase


@pytest.fixture()
def case_ledger():
    ledger = Ledger("demo")
    assert ingest_lines(case_study_lines(), ledger).accepted == 6
    return ledger


def test_spend_by_currency_no_double_counting(case_ledger):
    rows = report_spend_by_currency(case_ledger)
    assert [(r.code, r.real_spend, r.virtual_bought) for r in rows] == [
        ("gems", Fraction(1999, 100), 2500),
        ("gold", Fraction(0), 0),  # bought with gems, not money
    ]


def test_spend_by_currency_empty_ledger():
    assert report_spend_by_currency(Ledger("demo")) == []


def test_spend_rows_sum_to_injected_total():
    for seed in range(10):
        ledger = Ledger("t")
        ledger.apply_all(random_log(seed, 30))
        rows = report_spend_by_currency(ledger)
        direct = sum(
            (e.payload.paid.amount for e in ledger.events
             if isinstance(e.payload, RealMoneyPurchase)),
            Fraction(0),
        )
        assert sum((r.real_spend for r in rows), Fraction(0)) == direct


def test_by_date_single_bucket(case_ledger):
    buckets = report_by_date(case_ledger, "day")
    assert len(buckets) == 1
    (bucket,) = buckets
    assert bucket.bucket == "2024-05-12"
    assert bucket.real_spend == Fraction(1999, 100)
    assert [a.total_basis for a in bucket.attributions] == [
        Fraction(1999, 1000), Fraction(5997, 15625)]


def test_by_date_month_grouping(case_ledger):
    buckets = report_by_date(case_ledger, "month")
    assert [b.bucket for b in buckets] == ["2024-05"]


def test_offset_pushes_2359_into_next_day():
    ledger = Ledger("demo")
    lines = [
        '{"type":"grant","event_id":"z1","app_id":"demo","ts":"2024-05-12T23:59:00Z",'
        '"received":{"code":"gems","units":10}}',
    ]
    ingest_lines(lines, ledger)
    (utc_bucket,) = report_by_date(ledger, "day")
    assert utc_bucket.bucket == "2024-05-12"
    (shifted,) = report_by_date(ledger, "day", tz_offset=parse_tz_offset("+02:00"))
    assert shifted.bucket == "2024-05-13"


def test_bucket_sums_equal_ungrouped_totals():
    for seed in range(8):
        ledger = Ledger("t")
        ledger.apply_all(random_log(seed, 40))
        rows = report_spend_by_currency(ledger)
        buckets = report_by_date(ledger, "day")
        assert sum((b.real_spend for b in buckets), Fraction(0)) \
            == sum((r.real_spend for r in rows), Fraction(0))
        assert sum(len(b.attributions) for b in buckets) == len(ledger.attributions)


def test_date_range_filters_inclusively(case_ledger):
    in_range = DateRange(date(2024, 5, 12), date(2024, 5, 12))
    assert len(report_by_date(case_ledger, "day", date_range=in_range)) == 1
    before = DateRange(date(2024, 1, 1), date(2024, 1, 31))
    assert report_by_date(case_ledger, "day", date_range=before) == []
    assert report_spend_by_currency(case_ledger, before) == []


def test_inverted_range_rejected():
    with pytest.raises(InvalidDateRange):
        DateRange(date(2024, 2, 2), date(2024, 2, 1))


@pytest.mark.parametrize("text,seconds", [
    ("+00:00", 0), ("+02:00", 7200), ("-05:30", -19800), ("Z", 0),
])
def test_tz_offset_round_trip(text, seconds):
    offset = parse_tz_offset(text)
    assert offset == timedelta(seconds=seconds)
    if text != "Z":
        assert format_tz_offset(offset) == text


def test_tz_offset_garbage_rejected():
    with pytest.raises(InvalidDateRange):
        parse_tz_offset("utc+2")


def test_report_document_shape_and_determinism(case_ledger):
    doc = build_report_document(case_ledger, grouping="day")
    assert doc["totals"]["real_spend"] == {"exact": "1999/100", "display": "19.99"}
    assert [a["cost"]["display"] for a in doc["attributions"]] == ["1.99", "0.38"]
    assert [a["cost"]["exact"] for a in doc["attributions"]] == ["1999/1000", "5997/15625"]
    assert doc["wallet"] == {"gems": 2340, "gold": 200}
    assert len(doc["buckets"]) == 1
    # Identical state renders identical bytes.
    again = build_report_document(case_ledger, grouping="day")
    assert render_json(doc) == render_json(again)


def test_group_none_matches_day_bucket_sums(case_ledger):
    flat = build_report_document(case_ledger)
    grouped = build_report_document(case_ledger, grouping="day")
    assert flat["buckets"] is None
    bucket_ids = [a["id"] for b in grouped["buckets"] for a in b["attributions"]]
    assert bucket_ids == [a["id"] for a in flat["attributions"]]
