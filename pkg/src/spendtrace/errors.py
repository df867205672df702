"""Domain and parse errors.

Every error carries a stable machine `code` (used verbatim in ingest
rejection reports and API error bodies) and an `http_status` for the
service layer. Raising any of these before a ledger mutates guarantees
apply stays atomic.
"""

from __future__ import annotations


class TrackerError(Exception):
    code = "tracker_error"
    http_status = 400


class DuplicateEventId(TrackerError):
    code = "duplicate_event_id"
    http_status = 409

    def __init__(self, event_id: str):
        self.event_id = event_id
        super().__init__(f"event {event_id!r} was already applied")


class InsufficientBalance(TrackerError):
    code = "insufficient_balance"

    def __init__(self, currency: str, have: int, need: int):
        self.currency = currency
        self.have = have
        self.need = need
        super().__init__(f"need {need} {currency}, have {have}")


class UnknownCurrency(TrackerError):
    code = "unknown_currency"

    def __init__(self, currency: str, detail: str = ""):
        self.currency = currency
        super().__init__(detail or f"currency {currency!r} has never been acquired")


class NonPositiveQuantity(TrackerError):
    code = "non_positive_quantity"


class RealCurrencyInVirtualPosition(TrackerError):
    code = "real_currency_in_virtual_position"


class ReportCurrencyMismatch(TrackerError):
    code = "report_currency_mismatch"


class AppMismatch(TrackerError):
    code = "app_mismatch"


class StaleEvent(TrackerError):
    code = "stale_event"


class EmptyChain(TrackerError):
    code = "empty_chain"

    def __init__(self):
        super().__init__("a price chain needs at least one rate")


class UnknownAttribution(TrackerError):
    code = "unknown_attribution"
    http_status = 404

    def __init__(self, attribution_id: str):
        self.attribution_id = attribution_id
        super().__init__(f"no attribution for event {attribution_id!r}")


class InvalidDateRange(TrackerError):
    code = "invalid_date_range"


class UnknownApp(TrackerError):
    code = "unknown_app"
    http_status = 404

    def __init__(self, app_id: str):
        self.app_id = app_id
        super().__init__(f"app {app_id!r} is not configured")


class StateDirError(TrackerError):
    code = "state_dir_error"


# --- line-level parse failures -------------------------------------------

class ParseError(TrackerError):
    code = "parse_error"


class MalformedJson(ParseError):
    code = "malformed_json"


class MissingField(ParseError):
    code = "missing_field"

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"missing field {name!r}")


class BadTimestamp(ParseError):
    code = "bad_timestamp"


class BadDecimal(ParseError):
    code = "bad_decimal"


class UnknownEventType(ParseError):
    code = "unknown_event_type"


class UnsupportedSchemaVersion(ParseError):
    code = "unsupported_schema_version"
