"""The canonical walkthrough scenario and its golden values.

A player buys the $19.99 / 2500-gem pack, buys a 250-gem magic chest,
swaps 60 gems for a 1000-gold pack, buys 8 wizard cards for 800 gold,
earns a small gem grant, and resells the chest. The chest must attribute
to exactly 1999/1000 dollars and the wizards to exactly 5997/15625
(0.383808) — display "$1.99" and "$0.38".

Both golden values are invariant under LIFO (each hop drains a single
costed lot) and under scaling every quantity by a positive integer.
"""

from __future__ import annotations

import json
from fractions import Fraction

APP_ID = "demo"

CHEST_BASIS = Fraction(1999, 1000)         # 250/2500 * 19.99
WIZARDS_BASIS = Fraction(5997, 15625)      # 800/1000 * 60 * 19.99/2500 = 0.383808

CHEST_EVENT_ID = "cs-002"
WIZARDS_EVENT_ID = "cs-004"


def case_study_lines(scale: int = 1, app_id: str = APP_ID) -> list[str]:
    """The six-event JSONL log, with every quantity multiplied by ``scale``."""
    if scale <= 0:
        raise ValueError("scale must be a positive integer")
    s = scale
    records = [
        {
            "type": "real_purchase", "event_id": "cs-001", "app_id": app_id,
            "ts": "2024-05-12T09:00:00Z",
            "paid": {"amount": "19.99", "currency": "USD"},
            "received": {"code": "gems", "units": 2500 * s},
        },
        {
            "type": "item_purchase", "event_id": CHEST_EVENT_ID, "app_id": app_id,
            "ts": "2024-05-12T09:05:00Z",
            "item_id": "magic_chest", "count": 1 * s,
            "paid_with": [{"code": "gems", "units": 250 * s}],
        },
        {
            "type": "exchange", "event_id": "cs-003", "app_id": app_id,
            "ts": "2024-05-12T09:10:00Z",
            "spent": {"code": "gems", "units": 60 * s},
            "received": {"code": "gold", "units": 1000 * s},
        },
        {
            "type": "item_purchase", "event_id": WIZARDS_EVENT_ID, "app_id": app_id,
            "ts": "2024-05-12T09:15:00Z",
            "item_id": "wizard_card", "count": 8 * s,
            "paid_with": [{"code": "gold", "units": 800 * s}],
        },
        {
            "type": "grant", "event_id": "cs-005", "app_id": app_id,
            "ts": "2024-05-12T09:20:00Z",
            "received": {"code": "gems", "units": 50 * s},
            "reason": "daily reward",
        },
        {
            "type": "item_sale", "event_id": "cs-006", "app_id": app_id,
            "ts": "2024-05-12T09:25:00Z",
            "item_id": "magic_chest", "count": 1 * s,
            "proceeds": {"code": "gems", "units": 100 * s},
        },
    ]
    return [json.dumps(r, separators=(",", ":")) for r in records]
