"""JSONL parsing, ordering, idempotency, and round-trips."""

import json
import random
from fractions import Fraction

import pytest

from spendtrace import Ledger
from spendtrace.casestudy import case_study_lines
from spendtrace.errors import (
    BadDecimal,
    BadTimestamp,
    MalformedJson,
    MissingField,
    UnknownEventType,
    UnsupportedSchemaVersion,
)
from spendtrace.ingest import (
    ingest_lines,
    parse_event_line,
    serialize_record,
)
from spendtrace.model import RealMoneyPurchase
from spendtrace.reports import build_report_document, render_json

GEM_PACK = (
    '{"type":"real_purchase","event_id":"p1","app_id":"demo","ts":"2024-05-12T09:00:00Z",'
    '"paid":{"amount":"19.99","currency":"USD"},"received":{"code":"gems","units":2500}}'
)


def test_parse_real_purchase():
    record = parse_event_line(GEM_PACK)
    payload = record.event.payload
    assert isinstance(payload, RealMoneyPurchase)
    assert payload.paid.amount == Fraction(1999, 100)
    assert payload.units == 2500
    assert record.event.timestamp.isoformat() == "2024-05-12T09:00:00+00:00"


def test_empty_object_is_missing_field():
    with pytest.raises(MissingField):
        parse_event_line("{}")


def test_trailing_zeros_parse_to_same_rational():
    a = json.loads(GEM_PACK)
    a["paid"]["amount"] = "19.990000"
    assert parse_event_line(json.dumps(a)).event.payload.paid.amount \
        == parse_event_line(GEM_PACK).event.payload.paid.amount


def test_float_amount_rejected():
    a = json.loads(GEM_PACK)
    a["paid"]["amount"] = 19.99
    with pytest.raises(BadDecimal):
        parse_event_line(json.dumps(a))


def test_fractional_units_rejected():
    a = json.loads(GEM_PACK)
    a["received"]["units"] = 2500.0
    with pytest.raises(BadDecimal):
        parse_event_line(json.dumps(a))


@pytest.mark.parametrize("ts", [
    "2024-05-12 09:00:00",          # no offset
    "2024-05-12T09:00:00+02:00",    # not UTC
    "2024-05-12T09:00:00.250Z",     # sub-second
    "yesterday",
])
def test_bad_timestamps(ts):
    a = json.loads(GEM_PACK)
    a["ts"] = ts
    with pytest.raises(BadTimestamp):
        parse_event_line(json.dumps(a))


def test_unknown_type_and_schema_version():
    a = json.loads(GEM_PACK)
    a["type"] = "refund"
    with pytest.raises(UnknownEventType):
        parse_event_line(json.dumps(a))
    b = json.loads(GEM_PACK)
    b["schema_version"] = 2
    with pytest.raises(UnsupportedSchemaVersion):
        parse_event_line(json.dumps(b))


def test_not_json_and_not_object():
    with pytest.raises(MalformedJson):
        parse_event_line("not json at all")
    with pytest.raises(MalformedJson):
        parse_event_line("[1,2,3]")


def test_missing_event_id_gets_deterministic_hash():
    a = json.loads(GEM_PACK)
    del a["event_id"]
    line = json.dumps(a)
    r1 = parse_event_line(line)
    r2 = parse_event_line(json.dumps(a, indent=2))  # formatting-insensitive
    assert r1.event.event_id == r2.event.event_id
    assert len(r1.event.event_id) == 64


def test_round_trip_all_event_kinds():
    for line in case_study_lines():
        record = parse_event_line(line)
        assert parse_event_line(serialize_record(record)) == record


def test_case_study_ingest_counts_and_goldens():
    ledger = Ledger("demo")
    report = ingest_lines(case_study_lines(), ledger)
    assert (report.accepted, report.rejected) == (6, [])
    assert ledger.attribution("cs-002").total_basis == Fraction(1999, 1000)
    assert ledger.attribution("cs-004").total_basis == Fraction(5997, 15625)


def test_double_ingest_rejects_all_as_duplicates_and_changes_nothing():
    ledger = Ledger("demo")
    ingest_lines(case_study_lines(), ledger)
    before = render_json(build_report_document(ledger, grouping="day"))
    report = ingest_lines(case_study_lines(), ledger)
    assert report.accepted == 0
    assert len(report.rejected) == 6
    assert {r.code for r in report.rejected} == {"duplicate_event_id"}
    assert render_json(build_report_document(ledger, grouping="day")) == before


def test_shuffled_lines_restore_timestamp_order():
    in_order = Ledger("demo")
    ingest_lines(case_study_lines(), in_order)
    expected = render_json(build_report_document(in_order, grouping="day"))
    for seed in range(6):
        lines = case_study_lines()
        random.Random(seed).shuffle(lines)
        ledger = Ledger("demo")
        report = ingest_lines(lines, ledger)
        assert report.accepted == 6
        assert render_json(build_report_document(ledger, grouping="day")) == expected


def test_split_batches_equal_one_batch():
    lines = case_study_lines()
    one = Ledger("demo")
    ingest_lines(lines, one)
    for cut in range(1, len(lines)):
        two = Ledger("demo")
        ingest_lines(lines[:cut], two)
        ingest_lines(lines[cut:], two)
        assert render_json(build_report_document(two, grouping="day")) \
            == render_json(build_report_document(one, grouping="day"))


def test_cross_batch_stale_event_rejected():
    ledger = Ledger("demo")
    ingest_lines(case_study_lines(), ledger)
    stale = (
        '{"type":"grant","event_id":"old1","app_id":"demo","ts":"2024-05-11T00:00:00Z",'
        '"received":{"code":"gems","units":5}}'
    )
    report = ingest_lines([stale], ledger)
    assert report.accepted == 0
    assert report.rejected[0].code == "stale_event"


def test_equal_to_head_timestamp_is_not_stale():
    ledger = Ledger("demo")
    ingest_lines(case_study_lines(), ledger)
    peer = (
        '{"type":"grant","event_id":"new1","app_id":"demo","ts":"2024-05-12T09:25:00Z",'
        '"received":{"code":"gems","units":5}}'
    )
    assert ingest_lines([peer], ledger).accepted == 1


def test_line_isolation_bad_lines_do_not_poison_batch():
    lines = case_study_lines()
    lines.insert(2, "}{ garbage")
    lines.insert(4, "")  # blank lines skipped entirely
    ledger = Ledger("demo")
    report = ingest_lines(lines, ledger)
    assert report.accepted == 6
    assert [r.code for r in report.rejected] == ["malformed_json"]
    assert report.rejected[0].line_no == 3
    assert report.total == 7  # 6 events + 1 garbage; blank not counted


def test_a_tenth_ingested_1000_times_sums_to_exactly_100():
    lines = [
        json.dumps({
            "type": "real_purchase", "event_id": f"t{i:04d}", "app_id": "demo",
            "ts": "2024-05-12T09:00:00Z",
            "paid": {"amount": "0.1", "currency": "USD"},
            "received": {"code": "gems", "units": 1},
        })
        for i in range(1000)
    ]
    ledger = Ledger("demo")
    assert ingest_lines(lines, ledger).accepted == 1000
    assert ledger.conservation().injected == 100  # exactly, not 99.999…


def test_insufficient_balance_line_reported_not_raised():
    lines = [
        '{"type":"item_purchase","event_id":"b1","app_id":"demo","ts":"2024-05-12T09:00:00Z",'
        '"item_id":"x","count":1,"paid_with":[{"code":"gems","units":10}]}',
    ]
    report = ingest_lines(lines, Ledger("demo"))
    assert report.accepted == 0
    assert report.rejected[0].code == "unknown_currency"
