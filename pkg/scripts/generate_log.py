#!/usr/bin/env python3
"""Generate a random but always-valid JSONL event log for experiments.

Every exchange and item purchase is balance-aware, so the produced log
ingests with zero rejections. Usage:

    python scripts/generate_log.py --seed 7 --events 40 --app demo > log.jsonl
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from datetime import datetime, timedelta, timezone

CODES = ("gems", "gold", "tickets")
START = datetime(2024, 5, 1, 8, 0, 0, tzinfo=timezone.utc)


def generate(seed: int, n_events: int, app_id: str, max_qty: int) -> list[dict]:
    rng = random.Random(seed)
    balances: dict[str, int] = {}
    clock = START
    records: list[dict] = []

    def base(kind: str) -> dict:
        nonlocal clock
        clock += timedelta(seconds=rng.choice((0, 30, 3600)))
        return {
            "type": kind,
            "event_id": f"gen-{seed}-{len(records):04d}",
            "app_id": app_id,
            "ts": clock.strftime("%Y-%m-%dT%H:%M:%SZ"),
        }

    def funded() -> list[str]:
        return [c for c, b in balances.items() if b > 0]

    while len(records) < n_events:
        kind = rng.choice(("real_purchase", "real_purchase", "grant",
                           "exchange", "item_purchase", "item_sale"))
        if kind == "real_purchase":
            code = rng.choice(CODES)
            units = rng.randint(1, max_qty)
            cents = rng.randint(1, 9999)
            record = base(kind)
            record["paid"] = {"amount": f"{cents // 100}.{cents % 100:02d}",
                              "currency": "USD"}
            record["received"] = {"code": code, "units": units}
            balances[code] = balances.get(code, 0) + units
        elif kind == "grant":
            code = rng.choice(CODES)
            units = rng.randint(1, max_qty)
            record = base(kind)
            record["received"] = {"code": code, "units": units}
            record["reason"] = rng.choice(("daily reward", "quest", "season pass"))
            balances[code] = balances.get(code, 0) + units
        elif kind == "exchange":
            if not funded():
                continue
            spent = rng.choice(funded())
            spent_units = rng.randint(1, balances[spent])
            received = rng.choice(CODES)
            received_units = rng.randint(1, max_qty)
            record = base(kind)
            record["spent"] = {"code": spent, "units": spent_units}
            record["received"] = {"code": received, "units": received_units}
            balances[spent] -= spent_units
            balances[received] = balances.get(received, 0) + received_units
        elif kind == "item_purchase":
            if not funded():
                continue
            code = rng.choice(funded())
            units = rng.randint(1, balances[code])
            record = base(kind)
            record["item_id"] = f"item-{rng.randint(1, 12)}"
            record["count"] = rng.randint(1, 3)
            record["paid_with"] = [{"code": code, "units": units}]
            balances[code] -= units
        else:  # item_sale
            code = rng.choice(CODES)
            units = rng.randint(1, max_qty)
            record = base(kind)
            record["item_id"] = f"item-{rng.randint(1, 12)}"
            record["count"] = 1
            record["proceeds"] = {"code": code, "units": units}
            balances[code] = balances.get(code, 0) + units
        records.append(record)
    return records


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--events", type=int, default=40)
    parser.add_argument("--app", default="demo")
    parser.add_argument("--max-qty", type=int, default=500)
    args = parser.parse_args()
    for record in generate(args.seed, args.events, args.app, args.max_qty):
        print(json.dumps(record, separators=(",", ":")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
