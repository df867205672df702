"""Domain types: currencies, events, lots, attributions, traces.

The economy is event-sourced. Five immutable event payloads describe
everything that can happen to an app's currencies; lots carry the exact
real-money unit basis a batch of virtual currency descends from, and an
attribution pins the real cost of one item purchase to the lots it drained.

Quantities of virtual currency and item counts are plain non-negative ints
(gems, gold and cards are discrete); money amounts are exact Fractions.
Invalid events cannot be constructed: payload validation lives in
``__post_init__`` so a ledger never sees a half-legal fact.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Union

from .errors import (
    NonPositiveQuantity,
    RealCurrencyInVirtualPosition,
    UnknownCurrency,
)

_ISO_CODE_RE = re.compile(r"^[A-Z]{3}$")


class Kind(enum.Enum):
    REAL = "real"
    VIRTUAL = "virtual"


class Strategy(enum.Enum):
    """Lot consumption order: oldest-first or newest-first."""

    FIFO = "fifo"
    LIFO = "lifo"


@dataclass(frozen=True)
class CurrencyId:
    """A currency, either real (ISO-4217-style) or scoped to one app.

    Real currencies have a 3-letter uppercase code and no app scope;
    virtual currencies belong to exactly one app and must not masquerade
    as real money (an ISO-style code in a virtual position is rejected).
    """

    code: str
    kind: Kind
    app_id: str | None = None

    def __post_init__(self):
        if self.kind is Kind.REAL:
            if not _ISO_CODE_RE.match(self.code):
                raise UnknownCurrency(self.code, f"{self.code!r} is not an ISO-style real currency code")
        else:
            if not self.app_id:
                raise RealCurrencyInVirtualPosition(f"virtual currency {self.code!r} needs an app_id")
            if _ISO_CODE_RE.match(self.code):
                raise RealCurrencyInVirtualPosition(
                    f"{self.code!r} looks like a real currency; it cannot sit in a virtual position"
                )


def real_currency(code: str) -> CurrencyId:
    return CurrencyId(code=code, kind=Kind.REAL)


def virtual_currency(app_id: str, code: str) -> CurrencyId:
    return CurrencyId(code=code, kind=Kind.VIRTUAL, app_id=app_id)


@dataclass(frozen=True)
class Money:
    """A non-negative exact amount of one real currency."""

    amount: Fraction
    currency: CurrencyId

    def __post_init__(self):
        if self.currency.kind is not Kind.REAL:
            raise RealCurrencyInVirtualPosition(f"money must be denominated in a real currency, got {self.currency.code!r}")
        if self.amount < 0:
            raise NonPositiveQuantity(f"money amount must be >= 0, got {self.amount}")


def _require_positive(value: int, what: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
        raise NonPositiveQuantity(f"{what} must be a positive integer, got {value!r}")


def _require_virtual(currency: CurrencyId, slot: str) -> None:
    if currency.kind is not Kind.VIRTUAL:
        raise RealCurrencyInVirtualPosition(f"{slot} must be a virtual currency, got {currency.code!r}")


@dataclass(frozen=True)
class RealMoneyPurchase:
    """Real money in, one batch of virtual currency out."""

    paid: Money
    currency: CurrencyId
    units: int

    def __post_init__(self):
        _require_virtual(self.currency, "received currency")
        _require_positive(self.units, "received units")
        # A $0 purchase would mint a zero-basis lot that did not descend
        # from a grant or resale, breaking the lot-basis iff invariant.
        if self.paid.amount == 0:
            raise NonPositiveQuantity("a real-money purchase must pay a positive amount")


@dataclass(frozen=True)
class Exchange:
    """One virtual currency spent for another inside the same app."""

    spent_currency: CurrencyId
    spent_units: int
    received_currency: CurrencyId
    received_units: int

    def __post_init__(self):
        _require_virtual(self.spent_currency, "spent currency")
        _require_virtual(self.received_currency, "received currency")
        _require_positive(self.spent_units, "spent units")
        _require_positive(self.received_units, "received units")


@dataclass(frozen=True)
class ItemPurchase:
    """An item bought with one or more virtual currencies.

    paid_with order is meaningful: currencies are consumed in the order
    listed (the log producer controls mixed-currency prioritisation).
    """

    item_id: str
    count: int
    paid_with: tuple[tuple[CurrencyId, int], ...]

    def __post_init__(self):
        _require_positive(self.count, "item count")
        if not self.paid_with:
            raise NonPositiveQuantity("paid_with must list at least one currency")
        for currency, units in self.paid_with:
            _require_virtual(currency, "paid_with currency")
            _require_positive(units, "paid_with units")


@dataclass(frozen=True)
class ItemSale:
    """An item resold for virtual currency. Proceeds carry zero basis."""

    item_id: str
    count: int
    proceeds_currency: CurrencyId
    proceeds_units: int

    def __post_init__(self):
        _require_positive(self.count, "item count")
        _require_virtual(self.proceeds_currency, "proceeds currency")
        _require_positive(self.proceeds_units, "proceeds units")


@dataclass(frozen=True)
class Grant:
    """Currency earned through play. No real cost, ever."""

    currency: CurrencyId
    units: int
    reason: str = ""

    def __post_init__(self):
        _require_virtual(self.currency, "granted currency")
        _require_positive(self.units, "granted units")


Payload = Union[RealMoneyPurchase, Exchange, ItemPurchase, ItemSale, Grant]


def _payload_currencies(payload: Payload):
    if isinstance(payload, RealMoneyPurchase):
        yield payload.currency
    elif isinstance(payload, Exchange):
        yield payload.spent_currency
        yield payload.received_currency
    elif isinstance(payload, ItemPurchase):
        for currency, _ in payload.paid_with:
            yield currency
    elif isinstance(payload, ItemSale):
        yield payload.proceeds_currency
    elif isinstance(payload, Grant):
        yield payload.currency


@dataclass(frozen=True)
class Event:
    """One immutable fact about the economy, at UTC second precision."""

    event_id: str
    app_id: str
    timestamp: datetime
    payload: Payload

    def __post_init__(self):
        if not self.event_id:
            raise NonPositiveQuantity("event_id must be non-empty")
        ts = self.timestamp
        if ts.tzinfo is None:
            raise ValueError(f"event {self.event_id}: timestamp must be timezone-aware")
        ts = ts.astimezone(timezone.utc).replace(microsecond=0)
        object.__setattr__(self, "timestamp", ts)
        from .errors import AppMismatch  # local import avoids cycle at module load

        for currency in _payload_currencies(self.payload):
            if currency.app_id != self.app_id:
                raise AppMismatch(
                    f"event {self.event_id}: currency {currency.code!r} belongs to app "
                    f"{currency.app_id!r}, not {self.app_id!r}"
                )


@dataclass
class Lot:
    """A batch of one virtual currency with an immutable real-money basis.

    ``remaining`` is the only mutable field; everything else is fixed at
    creation. ``unit_basis`` is zero exactly when the batch descends only
    from grants or resale proceeds. ``seq`` breaks acquisition-order ties
    between equal second-precision timestamps (event log order).
    """

    lot_id: str
    currency: CurrencyId
    acquired_units: int
    remaining: int
    unit_basis: Fraction
    origin_event_id: str
    acquired_at: datetime
    seq: int

    def __post_init__(self):
        if self.unit_basis < 0:
            raise NonPositiveQuantity(f"lot {self.lot_id}: unit_basis must be >= 0")
        if self.remaining < 0:
            raise NonPositiveQuantity(f"lot {self.lot_id}: remaining must be >= 0")

    @property
    def sort_key(self) -> tuple[datetime, int]:
        return (self.acquired_at, self.seq)


@dataclass(frozen=True)
class Consumption:
    """``taken`` units drained from one lot; basis_part = taken x unit_basis."""

    lot_id: str
    taken: int
    basis_part: Fraction


@dataclass(frozen=True)
class Attribution:
    """The exact real-money cost assigned to one item purchase event."""

    event_id: str
    item_id: str
    count: int
    consumptions: tuple[Consumption, ...]
    total_basis: Fraction
    timestamp: datetime

    @property
    def unit_cost(self) -> Fraction:
        """Display-only per-item cost; attribution itself is per purchase."""
        return self.total_basis / self.count


@dataclass(frozen=True)
class TraceStep:
    description: str
    rate: Fraction
    running_product: Fraction
    term: str


@dataclass(frozen=True)
class TraceSegment:
    """Derivation of one consumption's basis_part as a product of rates."""

    lot_id: str
    steps: tuple[TraceStep, ...]
    subtotal: Fraction
    expression: str


@dataclass(frozen=True)
class Trace:
    """Step-by-step derivation of an attribution, back to real money."""

    attribution_id: str
    item_id: str
    segments: tuple[TraceSegment, ...]
    total: Fraction
    rendered_arithmetic: str

    @property
    def steps(self) -> tuple[TraceStep, ...]:
        return tuple(step for segment in self.segments for step in segment.steps)
