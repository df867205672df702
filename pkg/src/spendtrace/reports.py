"""Spend reports: per-currency totals and date-bucketed views.

Real spend counts RealMoneyPurchase amounts only; exchanges never double
count. Date bucketing converts the UTC event timestamp with a fixed
offset, so "23:59Z at +02:00" lands on the next local day. The report
document built here is the single wire shape both the CLI (--format json)
and the HTTP service emit, rendered through `render_json` so the two are
byte-identical for the same state.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from fractions import Fraction

from .errors import InvalidDateRange
from .ledger import Ledger, ZERO
from .model import Attribution, Exchange, Grant, ItemPurchase, ItemSale, RealMoneyPurchase
from .money import display_2dp, money_fields

_TZ_RE = re.compile(r"^([+-])(\d{2}):(\d{2})$")

GROUPINGS = ("none", "day", "month")


def parse_tz_offset(text: str) -> timedelta:
    """Parse "+HH:MM" / "-HH:MM" / "Z" into a fixed offset."""
    if text in ("Z", "z", "", None):
        return timedelta(0)
    m = _TZ_RE.match(text)
    if not m:
        raise InvalidDateRange(f"bad timezone offset {text!r}, expected +HH:MM")
    sign, hh, mm = m.groups()
    delta = timedelta(hours=int(hh), minutes=int(mm))
    return -delta if sign == "-" else delta


def format_tz_offset(offset: timedelta) -> str:
    total = int(offset.total_seconds())
    sign = "-" if total < 0 else "+"
    total = abs(total)
    return f"{sign}{total // 3600:02d}:{total % 3600 // 60:02d}"


def local_date(ts: datetime, tz_offset: timedelta) -> date:
    return (ts + tz_offset).date()


@dataclass(frozen=True)
class DateRange:
    """Inclusive local-date window; either bound may be open."""

    start: date | None = None
    end: date | None = None

    def __post_init__(self):
        if self.start and self.end and self.start > self.end:
            raise InvalidDateRange(f"from {self.start} is after to {self.end}")

    def contains(self, day: date) -> bool:
        if self.start and day < self.start:
            return False
        if self.end and day > self.end:
            return False
        return True


@dataclass(frozen=True)
class CurrencyRow:
    app_id: str
    code: str
    real_spend: Fraction
    virtual_bought: int


@dataclass(frozen=True)
class DateBucket:
    bucket: str
    real_spend: Fraction
    attributions: tuple[Attribution, ...]


def report_spend_by_currency(ledger: Ledger, date_range: DateRange = DateRange(),
                             tz_offset: timedelta = timedelta(0)) -> list[CurrencyRow]:
    """Per-currency rows: money spent buying each currency directly.

    A currency touched in-range appears even with zero direct spend (gold
    bought with gems shows $0 — the money is attributed to the gems).
    Rows are ordered by (app_id, code).
    """
    spend: dict[str, Fraction] = {}
    bought: dict[str, int] = {}
    touched: set[str] = set()
    for event in ledger.events:
        if not date_range.contains(local_date(event.timestamp, tz_offset)):
            continue
        payload = event.payload
        if isinstance(payload, RealMoneyPurchase):
            code = payload.currency.code
            spend[code] = spend.get(code, ZERO) + payload.paid.amount
            bought[code] = bought.get(code, 0) + payload.units
            touched.add(code)
        else:
            for currency in _touched_currencies(payload):
                touched.add(currency)
    return [
        CurrencyRow(app_id=ledger.app_id, code=code,
                    real_spend=spend.get(code, ZERO),
                    virtual_bought=bought.get(code, 0))
        for code in sorted(touched)
    ]


def _touched_currencies(payload) -> list[str]:
    if isinstance(payload, Exchange):
        return [payload.spent_currency.code, payload.received_currency.code]
    if isinstance(payload, ItemPurchase):
        return [currency.code for currency, _ in payload.paid_with]
    if isinstance(payload, ItemSale):
        return [payload.proceeds_currency.code]
    if isinstance(payload, Grant):
        return [payload.currency.code]
    return []


def report_by_date(ledger: Ledger, grouping: str = "day",
                   tz_offset: timedelta = timedelta(0),
                   date_range: DateRange = DateRange()) -> list[DateBucket]:
    """Events bucketed by local calendar day or month, ascending."""
    if grouping not in ("day", "month"):
        raise InvalidDateRange(f"grouping must be day or month, got {grouping!r}")
    spend: dict[str, Fraction] = {}
    attrs: dict[str, list[Attribution]] = {}
    for event in ledger.events:
        day = local_date(event.timestamp, tz_offset)
        if not date_range.contains(day):
            continue
        key = day.isoformat() if grouping == "day" else f"{day.year:04d}-{day.month:02d}"
        payload = event.payload
        if isinstance(payload, RealMoneyPurchase):
            spend[key] = spend.get(key, ZERO) + payload.paid.amount
            attrs.setdefault(key, [])
        elif isinstance(payload, ItemPurchase):
            attrs.setdefault(key, []).append(ledger.attributions[event.event_id])
        else:
            attrs.setdefault(key, [])
    return [
        DateBucket(bucket=key, real_spend=spend.get(key, ZERO),
                   attributions=tuple(attrs.get(key, ())))
        for key in sorted(attrs)
    ]


# --- the canonical report document ----------------------------------------

def _attribution_fields(attribution: Attribution, tz_offset: timedelta) -> dict:
    return {
        "id": attribution.event_id,
        "item_id": attribution.item_id,
        "count": attribution.count,
        "date": local_date(attribution.timestamp, tz_offset).isoformat(),
        "cost": money_fields(attribution.total_basis),
        "unit_cost_display": display_2dp(attribution.unit_cost),
    }


def build_report_document(ledger: Ledger, *, date_range: DateRange = DateRange(),
                          grouping: str = "none",
                          tz_offset: timedelta = timedelta(0)) -> dict:
    """The full report as plain JSON-able data; see module docstring."""
    if grouping not in GROUPINGS:
        raise InvalidDateRange(f"group must be one of {GROUPINGS}, got {grouping!r}")
    rows = report_spend_by_currency(ledger, date_range, tz_offset)
    total_spend = sum((row.real_spend for row in rows), ZERO)
    in_range = [
        a for a in ledger.attributions.values()
        if date_range.contains(local_date(a.timestamp, tz_offset))
    ]
    doc = {
        "app_id": ledger.app_id,
        "report_currency": ledger.report_currency,
        "strategy": ledger.strategy.value,
        "from": date_range.start.isoformat() if date_range.start else None,
        "to": date_range.end.isoformat() if date_range.end else None,
        "group": grouping,
        "tz_offset": format_tz_offset(tz_offset),
        "totals": {"real_spend": money_fields(total_spend)},
        "currencies": [
            {
                "app_id": row.app_id,
                "code": row.code,
                "real_spend": money_fields(row.real_spend),
                "virtual_bought": row.virtual_bought,
            }
            for row in rows
        ],
        "attributions": [_attribution_fields(a, tz_offset) for a in in_range],
        "wallet": ledger.wallet.balances(),
        "buckets": None,
    }
    if grouping != "none":
        doc["buckets"] = [
            {
                "bucket": bucket.bucket,
                "real_spend": money_fields(bucket.real_spend),
                "attributions": [_attribution_fields(a, tz_offset) for a in bucket.attributions],
            }
            for bucket in report_by_date(ledger, grouping, tz_offset, date_range)
        ]
    return doc


def build_trace_document(ledger: Ledger, attribution_id: str) -> dict:
    from .trace import build_trace

    trace = build_trace(ledger, attribution_id)
    return {
        "attribution_id": trace.attribution_id,
        "item_id": trace.item_id,
        "segments": [
            {
                "lot_id": segment.lot_id,
                "steps": [
                    {
                        "description": step.description,
                        "rate": str(step.rate),
                        "running_product": str(step.running_product),
                        "term": step.term,
                    }
                    for step in segment.steps
                ],
                "subtotal": money_fields(segment.subtotal),
                "expression": segment.expression,
            }
            for segment in trace.segments
        ],
        "total": money_fields(trace.total),
        "arithmetic": trace.rendered_arithmetic,
    }


def render_json(doc) -> str:
    """One canonical JSON rendering, shared by CLI and service."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
