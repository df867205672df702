"""Independent oracles and random-log generators shared across the suite.

UnitOracle is the brute-force referee: it tags every atomic currency unit
with its exact real-money origin and consumes unit lists front-for-FIFO /
back-for-LIFO. It shares no code with the lot machinery, so agreement on
every attribution is evidence, not tautology.

The generators are plain `random.Random` so the acceptance suite can run
the mandated counts (hundreds to a thousand logs) deterministically and
fast; the hypothesis suites wrap them via st.integers() seeds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from fractions import Fraction

from spendtrace.model import (
    Event,
    Exchange,
    Grant,
    ItemPurchase,
    ItemSale,
    Money,
    RealMoneyPurchase,
    Strategy,
    real_currency,
    virtual_currency,
)

APP = "t"
CODES = ("luma", "orbs", "tix")
T0 = datetime(2024, 3, 1, 12, 0, 0, tzinfo=timezone.utc)


class UnitOracle:
    """Per-unit provenance simulation of one app's economy."""

    def __init__(self, strategy: Strategy):
        self.strategy = strategy
        self.units: dict[str, list[Fraction]] = {}
        self.attributions: dict[str, Fraction] = {}
        self.injected = Fraction(0)

    def _take(self, code: str, qty: int) -> Fraction:
        pool = self.units[code]
        assert len(pool) >= qty
        if self.strategy is Strategy.FIFO:
            taken, rest = pool[:qty], pool[qty:]
        else:
            taken, rest = pool[len(pool) - qty:], pool[:len(pool) - qty]
        self.units[code] = rest
        return sum(taken, Fraction(0))

    def _add(self, code: str, qty: int, per_unit: Fraction) -> None:
        self.units.setdefault(code, []).extend([per_unit] * qty)

    def apply(self, event: Event) -> None:
        p = event.payload
        if isinstance(p, RealMoneyPurchase):
            self.injected += p.paid.amount
            self._add(p.currency.code, p.units, p.paid.amount / p.units)
        elif isinstance(p, Exchange):
            basis = self._take(p.spent_currency.code, p.spent_units)
            self._add(p.received_currency.code, p.received_units, basis / p.received_units)
        elif isinstance(p, ItemPurchase):
            total = Fraction(0)
            for currency, units in p.paid_with:
                total += self._take(currency.code, units)
            self.attributions[event.event_id] = total
        elif isinstance(p, ItemSale):
            self._add(p.proceeds_currency.code, p.proceeds_units, Fraction(0))
        elif isinstance(p, Grant):
            self._add(p.currency.code, p.units, Fraction(0))

    def apply_all(self, events) -> None:
        for event in events:
            self.apply(event)

    def held_basis(self) -> Fraction:
        return sum((sum(pool, Fraction(0)) for pool in self.units.values()), Fraction(0))


@dataclass
class LogBuilder:
    """Balance-aware random event-log builder (always produces a valid log)."""

    rng: random.Random
    app_id: str = APP
    codes: tuple[str, ...] = CODES
    max_qty: int = 100
    allow_real: bool = True
    events: list[Event] = field(default_factory=list)
    balances: dict[str, int] = field(default_factory=dict)
    _clock: datetime = T0

    def _next_ts(self) -> datetime:
        # Zero steps exercise the equal-timestamp, log-order tiebreak.
        self._clock += timedelta(seconds=self.rng.choice((0, 1, 1, 60)))
        return self._clock

    def _emit(self, payload) -> Event:
        event = Event(
            event_id=f"e{len(self.events):04d}",
            app_id=self.app_id,
            timestamp=self._next_ts(),
            payload=payload,
        )
        self.events.append(event)
        return event

    def _currency(self, code: str):
        return virtual_currency(self.app_id, code)

    def _funded(self) -> list[str]:
        return [c for c, b in self.balances.items() if b > 0]

    def real_purchase(self) -> Event:
        code = self.rng.choice(self.codes)
        units = self.rng.randint(1, self.max_qty)
        cents = self.rng.randint(1, 9999)
        self.balances[code] = self.balances.get(code, 0) + units
        return self._emit(RealMoneyPurchase(
            paid=Money(Fraction(cents, 100), real_currency("USD")),
            currency=self._currency(code),
            units=units,
        ))

    def grant(self) -> Event:
        code = self.rng.choice(self.codes)
        units = self.rng.randint(1, self.max_qty)
        self.balances[code] = self.balances.get(code, 0) + units
        return self._emit(Grant(currency=self._currency(code), units=units, reason="play"))

    def exchange(self) -> Event | None:
        funded = self._funded()
        if not funded:
            return None
        spent = self.rng.choice(funded)
        spent_units = self.rng.randint(1, self.balances[spent])
        received = self.rng.choice(self.codes)
        received_units = self.rng.randint(1, self.max_qty)
        self.balances[spent] -= spent_units
        self.balances[received] = self.balances.get(received, 0) + received_units
        return self._emit(Exchange(
            spent_currency=self._currency(spent), spent_units=spent_units,
            received_currency=self._currency(received), received_units=received_units,
        ))

    def item_purchase(self) -> Event | None:
        funded = self._funded()
        if not funded:
            return None
        n_currencies = min(len(funded), self.rng.choice((1, 1, 1, 2)))
        picked = self.rng.sample(funded, n_currencies)
        paid_with = []
        for code in picked:
            units = self.rng.randint(1, self.balances[code])
            self.balances[code] -= units
            paid_with.append((self._currency(code), units))
        return self._emit(ItemPurchase(
            item_id=f"item{len(self.events)}",
            count=self.rng.randint(1, 3),
            paid_with=tuple(paid_with),
        ))

    def item_sale(self) -> Event:
        code = self.rng.choice(self.codes)
        units = self.rng.randint(1, self.max_qty)
        self.balances[code] = self.balances.get(code, 0) + units
        return self._emit(ItemSale(
            item_id=f"item{self.rng.randint(0, 20)}",
            count=self.rng.randint(1, 3),
            proceeds_currency=self._currency(code),
            proceeds_units=units,
        ))

    def random_event(self) -> Event:
        kinds = ["grant", "exchange", "item_purchase", "item_sale"]
        if self.allow_real:
            kinds = ["real_purchase", "real_purchase"] + kinds
        while True:
            kind = self.rng.choice(kinds)
            made = getattr(self, kind)()
            if made is not None:
                return made


def random_log(seed: int, n_events: int, max_qty: int = 100,
               allow_real: bool = True) -> list[Event]:
    builder = LogBuilder(rng=random.Random(seed), max_qty=max_qty, allow_real=allow_real)
    for _ in range(n_events):
        builder.random_event()
    return builder.events


def scale_log(events: list[Event], m: int) -> list[Event]:
    """Multiply every quantity (units and item counts) by m; money untouched."""
    import dataclasses

    scaled = []
    for event in events:
        p = event.payload
        if isinstance(p, RealMoneyPurchase):
            p = dataclasses.replace(p, units=p.units * m)
        elif isinstance(p, Exchange):
            p = dataclasses.replace(p, spent_units=p.spent_units * m,
                                    received_units=p.received_units * m)
        elif isinstance(p, ItemPurchase):
            p = dataclasses.replace(p, count=p.count * m, paid_with=tuple(
                (currency, units * m) for currency, units in p.paid_with))
        elif isinstance(p, ItemSale):
            p = dataclasses.replace(p, count=p.count * m, proceeds_units=p.proceeds_units * m)
        elif isinstance(p, Grant):
            p = dataclasses.replace(p, units=p.units * m)
        scaled.append(dataclasses.replace(event, payload=p))
    return scaled


@dataclass(frozen=True)
class SingleChain:
    """One pure chain: purchase -> full-lot exchanges -> one item buy."""

    events: list[Event]
    rates: list[Fraction]
    item_event_id: str


def single_chain(seed: int, max_hops: int = 4) -> SingleChain:
    """A random single-chain log plus its independently-derived hop rates.

    The hop rates walk backward from the item: the share of the final lot
    consumed, the quantity spent at each exchange over the size of the lot
    it came from, and finally the money paid per unit of the first currency.
    Their product is the item's price per the exchange-rate-chain rule.
    """
    rng = random.Random(seed)
    app = APP
    k = rng.randint(0, max_hops)
    cents = rng.randint(1, 99999)
    paid = Fraction(cents, 100)
    sizes = [rng.randint(1, 1000) for _ in range(k + 1)]
    taken = rng.randint(1, sizes[-1])

    events: list[Event] = []
    clock = T0

    def emit(payload):
        nonlocal clock
        clock += timedelta(seconds=1)
        events.append(Event(
            event_id=f"c{len(events):03d}", app_id=app, timestamp=clock, payload=payload))

    def code(i: int) -> str:
        return f"cur{i}"

    emit(RealMoneyPurchase(
        paid=Money(paid, real_currency("USD")),
        currency=virtual_currency(app, code(0)),
        units=sizes[0],
    ))
    for i in range(k):
        emit(Exchange(
            spent_currency=virtual_currency(app, code(i)), spent_units=sizes[i],
            received_currency=virtual_currency(app, code(i + 1)), received_units=sizes[i + 1],
        ))
    emit(ItemPurchase(
        item_id="chain_item", count=1,
        paid_with=((virtual_currency(app, code(k)), taken),),
    ))

    # Backward walk: share of final lot, spent-quantity hops, money per
    # unit of the first currency.
    rates = [Fraction(taken, sizes[k])]
    if k >= 1:
        rates.append(Fraction(sizes[k - 1]))
        for i in range(k - 2, -1, -1):
            rates.append(Fraction(sizes[i], sizes[i + 1]))
        rates.append(paid / sizes[0])
    else:
        rates.append(paid)

    return SingleChain(events=events, rates=rates, item_event_id=events[-1].event_id)
