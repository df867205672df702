"""Explanation traces: how an attribution's number was derived.

A trace has one segment per consumed lot. Each segment is a product of
rates that walks backward from the item to real money:

  chest (250 gems from a 2500-gem pack bought for $19.99):
      250/2500 x 19.99 = 1.99
  wizards (800 gold from a 1000-gold pack bought for 60 gems, gems at
  19.99/2500 each):
      800/1000 x 60 x 19.99/2500 = 0.38

The per-step running product is exact; the trailing "=" figure is the
2-decimal display. A consumption of a zero-basis lot (grant or resale
descended) collapses to a single "earned" step.
"""

from __future__ import annotations

from fractions import Fraction

from .ledger import Ledger, ZERO
from .model import (
    Attribution,
    Consumption,
    Exchange,
    Grant,
    ItemSale,
    Lot,
    RealMoneyPurchase,
    Trace,
    TraceSegment,
    TraceStep,
)
from .money import decimal_term, display_2dp


def build_trace(ledger: Ledger, attribution: Attribution | str) -> Trace:
    """Assemble the derivation trace for an attribution (or its event id)."""
    if isinstance(attribution, str):
        attribution = ledger.attribution(attribution)
    segments = tuple(
        _segment(ledger, attribution, consumption)
        for consumption in attribution.consumptions
    )
    if len(segments) == 1:
        arithmetic = segments[0].expression
    else:
        joined = " + ".join(f"({_terms_of(seg)})" for seg in segments)
        arithmetic = f"{joined} = {display_2dp(attribution.total_basis)}"
    return Trace(
        attribution_id=attribution.event_id,
        item_id=attribution.item_id,
        segments=segments,
        total=attribution.total_basis,
        rendered_arithmetic=arithmetic,
    )


def _terms_of(segment: TraceSegment) -> str:
    return " × ".join(step.term for step in segment.steps)


def _segment(ledger: Ledger, attribution: Attribution, consumption: Consumption) -> TraceSegment:
    lot = ledger.lot(consumption.lot_id)
    if lot.unit_basis == 0:
        step = TraceStep(
            description=_zero_basis_text(ledger, lot, consumption),
            rate=ZERO,
            running_product=ZERO,
            term="0",
        )
        return TraceSegment(
            lot_id=lot.lot_id,
            steps=(step,),
            subtotal=ZERO,
            expression="0 = 0.00",
        )

    code = lot.currency.code
    raw: list[tuple[str, Fraction, str]] = [(
        f"{attribution.item_id} took {consumption.taken} of the {lot.acquired_units} "
        f"{code} acquired in {lot.origin_event_id}",
        Fraction(consumption.taken, lot.acquired_units),
        f"{consumption.taken}/{lot.acquired_units}",
    )]
    raw.extend(_lot_basis_steps(ledger, lot))

    steps: list[TraceStep] = []
    running = Fraction(1)
    for description, rate, term in raw:
        running *= rate
        steps.append(TraceStep(description=description, rate=rate,
                               running_product=running, term=term))
    assert running == consumption.basis_part
    expression = " × ".join(s.term for s in steps) + f" = {display_2dp(running)}"
    return TraceSegment(
        lot_id=lot.lot_id,
        steps=tuple(steps),
        subtotal=running,
        expression=expression,
    )


def _lot_basis_steps(ledger: Ledger, lot: Lot) -> list[tuple[str, Fraction, str]]:
    """Rates whose product is the lot's whole basis (acquired x unit_basis)."""
    payload = ledger.event(lot.origin_event_id).payload
    code = lot.currency.code
    if isinstance(payload, RealMoneyPurchase):
        amount = payload.paid.amount
        return [(
            f"the {lot.acquired_units} {code} were bought for "
            f"{_money_text(ledger, amount)}",
            amount,
            decimal_term(amount),
        )]
    if isinstance(payload, Exchange):
        sources = ledger.exchange_consumptions(lot.lot_id)
        spent_code = payload.spent_currency.code
        bases = {ledger.lot(c.lot_id).unit_basis for c in sources}
        if len(bases) == 1:
            unit_basis = bases.pop()
            source_lot = ledger.lot(sources[0].lot_id)
            return [
                (
                    f"the {lot.acquired_units} {code} came from exchanging "
                    f"{payload.spent_units} {spent_code}",
                    Fraction(payload.spent_units),
                    str(payload.spent_units),
                ),
                (
                    f"each of those {spent_code} carried {_money_text(ledger, unit_basis)} of real cost",
                    unit_basis,
                    _unit_basis_term(ledger, source_lot),
                ),
            ]
        total = sum((c.basis_part for c in sources), ZERO)
        return [(
            f"the {payload.spent_units} {spent_code} blended real cost from "
            f"{len(sources)} lots, {_money_text(ledger, total)} in total",
            total,
            decimal_term(total),
        )]
    # Grants and sale proceeds never reach here: unit_basis == 0 short-circuits.
    raise AssertionError(f"lot {lot.lot_id} has basis but no costed origin")


def _unit_basis_term(ledger: Ledger, source_lot: Lot) -> str:
    origin = ledger.event(source_lot.origin_event_id).payload
    if isinstance(origin, RealMoneyPurchase):
        return f"{decimal_term(origin.paid.amount)}/{origin.units}"
    return decimal_term(source_lot.unit_basis)


def _zero_basis_text(ledger: Ledger, lot: Lot, consumption: Consumption) -> str:
    payload = ledger.event(lot.origin_event_id).payload
    if isinstance(payload, Grant):
        reason = f" ({payload.reason})" if payload.reason else ""
        return f"earned{reason} — $0.00"
    if isinstance(payload, ItemSale):
        return f"resale proceeds of {payload.item_id} — $0.00"
    return "descends only from free currency — $0.00"


def _money_text(ledger: Ledger, amount: Fraction) -> str:
    symbol = "$" if ledger.report_currency == "USD" else f"{ledger.report_currency} "
    return f"{symbol}{display_2dp(amount)}" if amount == 0 or amount >= Fraction(1, 100) \
        else f"{symbol}{decimal_term(amount)}"
