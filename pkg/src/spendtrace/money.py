"""Exact money arithmetic helpers.

All amounts are `fractions.Fraction` internally; binary floats never enter
the pipeline. Rounding exists only in `display_2dp`, which truncates toward
zero at two decimals so that the exact 1.9990 renders as "1.99" (the value
the shop actually charged fractions of, not a rounded-up "2.00").
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import BadDecimal

_DECIMAL_RE = re.compile(r"^[+-]?(?:\d+)(?:\.\d+)?$")


def parse_decimal(text: str) -> Fraction:
    """Parse a decimal string ("19.99", "0.1", "5") to an exact Fraction."""
    if not isinstance(text, str) or not _DECIMAL_RE.match(text):
        raise BadDecimal(f"not a decimal string: {text!r}")
    return Fraction(text)


def exact_str(value: Fraction) -> str:
    """Canonical exact rendering: "1999/1000", or "2" for integers."""
    return str(Fraction(value))


def display_2dp(value: Fraction) -> str:
    """Truncate toward zero at two decimals; always two decimal digits."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    cents = (abs(value).numerator * 100) // abs(value).denominator
    return f"{sign}{cents // 100}.{cents % 100:02d}"


def decimal_term(value: Fraction) -> str:
    """Exact arithmetic-term rendering for traces.

    Terminating decimals print in full ("19.99", "0.007996"); anything else
    stays a fraction ("1/3"). Never lossy.
    """
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return str(value)
    shift = max(twos, fives)
    scaled = abs(value.numerator) * 10**shift // value.denominator
    sign = "-" if value < 0 else ""
    if shift == 0:
        return f"{sign}{scaled}"
    text = f"{scaled:0{shift + 1}d}"
    whole, frac = text[:-shift], text[-shift:]
    frac = frac.rstrip("0") or "0"
    return f"{sign}{whole}.{frac}" if frac != "0" else f"{sign}{whole}"


def money_fields(value: Fraction) -> dict:
    """The wire shape for one amount: exact rational plus display string."""
    return {"exact": exact_str(value), "display": display_2dp(value)}
