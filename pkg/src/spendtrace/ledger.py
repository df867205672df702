"""The event-sourced ledger: lot inventory, attribution, conservation.

One Ledger per app. Applying an event is atomic: every check that can fail
runs before the first mutation, so a raised error leaves the ledger exactly
as it was. The event log is append-only and replay is deterministic; the
consumption strategy (FIFO/LIFO) is fixed at construction and changing it
means replaying the log into a fresh ledger.

The money math is a single invariant: real money enters only through
RealMoneyPurchase, and from then on is carried by lots. Exchanges blend the
bases of whatever they consume into the new lot; item purchases move basis
out of lots into attributions; grants and resale proceeds mint zero-basis
lots. Hence, exactly and at all times:

    sum(attribution bases) + sum(live lot bases) == sum(real money injected)
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    AppMismatch,
    DuplicateEventId,
    EmptyChain,
    InsufficientBalance,
    NonPositiveQuantity,
    ReportCurrencyMismatch,
    UnknownAttribution,
    UnknownCurrency,
)
from .model import (
    Attribution,
    Consumption,
    CurrencyId,
    Event,
    Exchange,
    Grant,
    ItemPurchase,
    ItemSale,
    Lot,
    RealMoneyPurchase,
    Strategy,
)

ZERO = Fraction(0)


class Wallet:
    """Per-currency lot inventory, ordered by (acquired_at, log order)."""

    def __init__(self, app_id: str):
        self.app_id = app_id
        self._lots: dict[str, list[Lot]] = {}

    def codes(self) -> list[str]:
        return sorted(self._lots)

    def balance(self, code: str) -> int:
        return sum(lot.remaining for lot in self._lots.get(code, ()))

    def balances(self) -> dict[str, int]:
        return {code: self.balance(code) for code in self.codes()}

    def knows(self, code: str) -> bool:
        return code in self._lots

    def lots(self, code: str) -> tuple[Lot, ...]:
        return tuple(self._lots.get(code, ()))

    def live_lots(self) -> Iterable[Lot]:
        for code in self.codes():
            yield from self._lots[code]

    def add_lot(self, lot: Lot) -> None:
        lots = self._lots.setdefault(lot.currency.code, [])
        # Timestamps normally arrive non-decreasing; bisect keeps the
        # acquisition-order invariant even if the caller applies out of order.
        keys = [l.sort_key for l in lots]
        lots.insert(bisect.bisect_right(keys, lot.sort_key), lot)

    def consume(self, code: str, qty: int, strategy: Strategy) -> list[Consumption]:
        """Drain ``qty`` units per strategy; partial lots allowed.

        Checks the full balance before touching any lot, so a raise never
        leaves a half-consumed wallet. Emptied lots leave the wallet.
        """
        if qty <= 0:
            raise NonPositiveQuantity(f"cannot consume {qty} units of {code}")
        if code not in self._lots:
            raise UnknownCurrency(code)
        lots = self._lots[code]
        have = sum(lot.remaining for lot in lots)
        if have < qty:
            raise InsufficientBalance(code, have, qty)

        order = lots if strategy is Strategy.FIFO else list(reversed(lots))
        consumed: list[Consumption] = []
        left = qty
        for lot in order:
            if left == 0:
                break
            taken = min(lot.remaining, left)
            if taken == 0:
                continue
            lot.remaining -= taken
            left -= taken
            consumed.append(Consumption(lot.lot_id, taken, taken * lot.unit_basis))
        self._lots[code] = [lot for lot in lots if lot.remaining > 0]
        return consumed


def consume(wallet: Wallet, currency: CurrencyId, qty: int, strategy: Strategy) -> list[Consumption]:
    """Module-level spelling of Wallet.consume for callers holding a CurrencyId."""
    return wallet.consume(currency.code, qty, strategy)


def chain_price(rates: Sequence[Fraction]) -> Fraction:
    """Price of an item as the product of its exchange-rate chain.

    For a pure chain of events (one real purchase, full-or-partial-lot hops,
    one item buy) this product equals the ledger's attribution total.
    """
    if len(rates) == 0:
        raise EmptyChain()
    product = Fraction(1)
    for rate in rates:
        rate = Fraction(rate)
        if rate < 0:
            raise ValueError(f"exchange rates must be >= 0, got {rate}")
        product *= rate
    return product


@dataclass(frozen=True)
class ConservationSums:
    attributed: Fraction
    held: Fraction
    injected: Fraction

    @property
    def balanced(self) -> bool:
        return self.attributed + self.held == self.injected


class Ledger:
    """Single-writer, per-app ledger. Reads never mutate."""

    def __init__(self, app_id: str, report_currency: str = "USD",
                 strategy: Strategy = Strategy.FIFO):
        self.app_id = app_id
        self.report_currency = report_currency
        self.strategy = strategy
        self.events: list[Event] = []
        self.wallet = Wallet(app_id)
        self.attributions: dict[str, Attribution] = {}
        self._events_by_id: dict[str, Event] = {}
        self._lots_by_id: dict[str, Lot] = {}
        self._exchange_consumptions: dict[str, tuple[Consumption, ...]] = {}
        self._injected = ZERO

    # -- queries ------------------------------------------------------------

    @property
    def head_timestamp(self) -> datetime | None:
        return self.events[-1].timestamp if self.events else None

    def seen(self, event_id: str) -> bool:
        return event_id in self._events_by_id

    def event(self, event_id: str) -> Event:
        return self._events_by_id[event_id]

    def lot(self, lot_id: str) -> Lot:
        return self._lots_by_id[lot_id]

    def exchange_consumptions(self, lot_id: str) -> tuple[Consumption, ...]:
        return self._exchange_consumptions.get(lot_id, ())

    def attribution(self, event_id: str) -> Attribution:
        try:
            return self.attributions[event_id]
        except KeyError:
            raise UnknownAttribution(event_id) from None

    def attribute_item_purchase(self, purchase: Event | str) -> Attribution:
        """The attribution recorded when the purchase event was applied."""
        event_id = purchase if isinstance(purchase, str) else purchase.event_id
        return self.attribution(event_id)

    def balance(self, code: str) -> int:
        return self.wallet.balance(code)

    def conservation(self) -> ConservationSums:
        """Exact conservation sums; `.balanced` must always hold."""
        attributed = sum((a.total_basis for a in self.attributions.values()), ZERO)
        held = sum((lot.remaining * lot.unit_basis for lot in self.wallet.live_lots()), ZERO)
        return ConservationSums(attributed=attributed, held=held, injected=self._injected)

    # -- writes ---------------------------------------------------------------

    def apply(self, event: Event) -> Event:
        """Validate, then mutate. Raises before any state change on failure."""
        if event.app_id != self.app_id:
            raise AppMismatch(f"event {event.event_id} is for app {event.app_id!r}, ledger is {self.app_id!r}")
        if event.event_id in self._events_by_id:
            raise DuplicateEventId(event.event_id)

        payload = event.payload
        if isinstance(payload, RealMoneyPurchase):
            if payload.paid.currency.code != self.report_currency:
                raise ReportCurrencyMismatch(
                    f"event {event.event_id} paid in {payload.paid.currency.code}, "
                    f"ledger tracks {self.report_currency} only"
                )
        elif isinstance(payload, Exchange):
            self._check_balance(payload.spent_currency.code, payload.spent_units)
        elif isinstance(payload, ItemPurchase):
            needed: dict[str, int] = {}
            for currency, units in payload.paid_with:
                needed[currency.code] = needed.get(currency.code, 0) + units
            for code, units in needed.items():
                self._check_balance(code, units)

        # Past this point nothing can fail.
        seq = len(self.events)
        self.events.append(event)
        self._events_by_id[event.event_id] = event

        if isinstance(payload, RealMoneyPurchase):
            self._injected += payload.paid.amount
            self._mint(event, payload.currency, payload.units,
                       payload.paid.amount / payload.units, seq)
        elif isinstance(payload, Exchange):
            consumed = self.wallet.consume(payload.spent_currency.code,
                                           payload.spent_units, self.strategy)
            blended = sum((c.basis_part for c in consumed), ZERO)
            lot = self._mint(event, payload.received_currency, payload.received_units,
                             blended / payload.received_units, seq)
            self._exchange_consumptions[lot.lot_id] = tuple(consumed)
        elif isinstance(payload, ItemPurchase):
            consumptions: list[Consumption] = []
            for currency, units in payload.paid_with:
                consumptions.extend(self.wallet.consume(currency.code, units, self.strategy))
            total = sum((c.basis_part for c in consumptions), ZERO)
            self.attributions[event.event_id] = Attribution(
                event_id=event.event_id,
                item_id=payload.item_id,
                count=payload.count,
                consumptions=tuple(consumptions),
                total_basis=total,
                timestamp=event.timestamp,
            )
        elif isinstance(payload, ItemSale):
            self._mint(event, payload.proceeds_currency, payload.proceeds_units, ZERO, seq)
        elif isinstance(payload, Grant):
            self._mint(event, payload.currency, payload.units, ZERO, seq)
        return event

    def apply_all(self, events: Iterable[Event]) -> None:
        for event in events:
            self.apply(event)

    @classmethod
    def replay(cls, events: Iterable[Event], app_id: str,
               report_currency: str = "USD",
               strategy: Strategy = Strategy.FIFO) -> "Ledger":
        ledger = cls(app_id, report_currency=report_currency, strategy=strategy)
        ledger.apply_all(events)
        return ledger

    # -- internals ------------------------------------------------------------

    def _check_balance(self, code: str, needed: int) -> None:
        if not self.wallet.knows(code):
            raise UnknownCurrency(code)
        have = self.wallet.balance(code)
        if have < needed:
            raise InsufficientBalance(code, have, needed)

    def _mint(self, event: Event, currency: CurrencyId, units: int,
              unit_basis: Fraction, seq: int) -> Lot:
        lot = Lot(
            lot_id=event.event_id,
            currency=currency,
            acquired_units=units,
            remaining=units,
            unit_basis=unit_basis,
            origin_event_id=event.event_id,
            acquired_at=event.timestamp,
            seq=seq,
        )
        self.wallet.add_lot(lot)
        self._lots_by_id[lot.lot_id] = lot
        return lot
