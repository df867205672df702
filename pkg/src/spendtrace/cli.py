"""Command-line front door.

    spendtrace ingest LOG --state-dir DIR        batch-ingest a JSONL log
    spendtrace report --state-dir DIR            print spend reports
    spendtrace trace ATTRIBUTION --state-dir DIR print a derivation trace
    spendtrace casestudy                         run the walkthrough, assert goldens
    spendtrace serve --config FILE               run the HTTP service

Exit codes: 0 ok, 1 domain failure (rejected lines, unknown id, golden
mismatch), 2 usage or I/O failure. `--format json` output is byte-identical
to the service's report endpoint for the same state.
"""

from __future__ import annotations

import argparse
import csv
import io
import socket
import sys
import tempfile
from datetime import date
from pathlib import Path

from .casestudy import (
    CHEST_BASIS,
    CHEST_EVENT_ID,
    WIZARDS_BASIS,
    WIZARDS_EVENT_ID,
    case_study_lines,
)
from .errors import TrackerError, UnknownAttribution
from .ingest import IngestReport
from .model import Strategy
from .money import display_2dp, exact_str
from .reports import DateRange, build_report_document, parse_tz_offset, render_json
from .store import StateDir
from .trace import build_trace

LOCK_TIMEOUT = 10.0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrackerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spendtrace",
        description="Track how real money flows through virtual currencies into items.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="ingest a JSONL event log into a state dir")
    ingest.add_argument("log", type=Path)
    ingest.add_argument("--state-dir", type=Path, required=True)
    _strategy_flag(ingest)
    ingest.add_argument("--currency", default=None, help="report currency (default USD)")
    ingest.set_defaults(func=cmd_ingest)

    report = sub.add_parser("report", help="print spend reports from a state dir")
    report.add_argument("--state-dir", type=Path, required=True)
    report.add_argument("--app", default=None, help="app id (default: the only one)")
    report.add_argument("--from", dest="from_date", type=date.fromisoformat, default=None)
    report.add_argument("--to", dest="to_date", type=date.fromisoformat, default=None)
    report.add_argument("--group", choices=("none", "day", "month"), default="none")
    report.add_argument("--tz", default="+00:00", help="fixed offset, e.g. +02:00")
    report.add_argument("--format", choices=("table", "json", "csv"), default="table")
    report.set_defaults(func=cmd_report)

    trace = sub.add_parser("trace", help="print one attribution's derivation")
    trace.add_argument("attribution_id")
    trace.add_argument("--state-dir", type=Path, required=True)
    trace.add_argument("--app", default=None)
    trace.set_defaults(func=cmd_trace)

    case = sub.add_parser("casestudy", help="run the walkthrough scenario end to end")
    _strategy_flag(case)
    case.add_argument("--scale", type=int, default=1,
                      help="multiply every quantity by this integer")
    case.set_defaults(func=cmd_casestudy)

    serve = sub.add_parser("serve", help="run the HTTP report service")
    serve.add_argument("--config", type=Path, required=True)
    serve.set_defaults(func=cmd_serve)
    return parser


def _strategy_flag(parser) -> None:
    parser.add_argument("--strategy", choices=("fifo", "lifo"), default=None)


def _open_state(args, need_app: bool = True):
    strategy = Strategy(args.strategy) if getattr(args, "strategy", None) else None
    state = StateDir(args.state_dir, strategy=strategy,
                     report_currency=getattr(args, "currency", None))
    if not need_app:
        return state, None
    apps = state.apps()
    app_id = getattr(args, "app", None)
    if not apps:
        return state, None  # empty state: "no events", not an error
    if app_id is None:
        if len(apps) != 1:
            raise TrackerError(f"state dir holds apps {apps}; pass --app")
        app_id = apps[0]
    elif app_id not in apps:
        raise TrackerError(f"app {app_id!r} not in state dir (have {apps})")
    return state, app_id


# --- ingest -----------------------------------------------------------------

def cmd_ingest(args) -> int:
    if not args.log.is_file():
        print(f"error: cannot read {args.log}", file=sys.stderr)
        return 2
    state, _ = _open_state(args, need_app=False)
    with state.lock().acquire(timeout=LOCK_TIMEOUT):
        report = state.ingest_file(args.log)
        state.close()
    print(_ingest_summary(report))
    for rejection in report.rejected:
        print(f"line {rejection.line_no}: {rejection.code}: {rejection.reason}",
              file=sys.stderr)
    return 0 if not report.rejected else 1


def _ingest_summary(report: IngestReport) -> str:
    return f"accepted {report.accepted}, rejected {len(report.rejected)}"


# --- report -------------------------------------------------------------------

def cmd_report(args) -> int:
    state, app_id = _open_state(args)
    if app_id is None:
        print("no events")
        return 0
    with state.lock().acquire(timeout=LOCK_TIMEOUT):
        ledger = state.open(app_id).ledger
        state.close()
    if not ledger.events:
        print("no events")
        return 0
    doc = build_report_document(
        ledger,
        date_range=DateRange(args.from_date, args.to_date),
        grouping=args.group,
        tz_offset=parse_tz_offset(args.tz),
    )
    if args.format == "json":
        print(render_json(doc))
    elif args.format == "csv":
        print(_report_csv(doc), end="")
    else:
        print(_report_table(doc))
    return 0


def _symbol(doc: dict) -> str:
    return "$" if doc["report_currency"] == "USD" else doc["report_currency"] + " "


def _report_table(doc: dict) -> str:
    sym = _symbol(doc)
    out = [f"App {doc['app_id']} — spend by currency "
           f"({doc['from'] or 'start'} … {doc['to'] or 'now'}, {doc['tz_offset']})"]
    rows = [("CURRENCY", "REAL SPEND", "UNITS BOUGHT", "BALANCE")]
    for row in doc["currencies"]:
        rows.append((row["code"], sym + row["real_spend"]["display"],
                     str(row["virtual_bought"]),
                     str(doc["wallet"].get(row["code"], 0))))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        out.append("  " + "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)))

    def item_lines(attributions, indent="  "):
        lines = []
        for a in attributions:
            cost = (sym + a["cost"]["display"]).rjust(9)
            lines.append(f"{indent}{cost}  {a['count']}× {a['item_id']}  [{a['id']}]")
        return lines

    if doc["buckets"] is not None:
        for bucket in doc["buckets"]:
            out.append("")
            out.append(f"{bucket['bucket']}  (spent {sym}{bucket['real_spend']['display']})")
            out.extend(item_lines(bucket["attributions"], indent="  "))
    elif doc["attributions"]:
        out.append("")
        out.append("Items:")
        out.extend(item_lines(doc["attributions"]))
    out.append("")
    out.append(f"Total spent: {sym}{doc['totals']['real_spend']['display']}")
    return "\n".join(out)


def _report_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "bucket", "code_or_item", "id", "count", "amount"])
    for row in doc["currencies"]:
        writer.writerow(["currency", "", row["code"], "", "", row["real_spend"]["display"]])
    for a in doc["attributions"]:
        writer.writerow(["attribution", a["date"], a["item_id"], a["id"],
                         a["count"], a["cost"]["display"]])
    writer.writerow(["total", "", "", "", "", doc["totals"]["real_spend"]["display"]])
    return buf.getvalue()


# --- trace ---------------------------------------------------------------------

def cmd_trace(args) -> int:
    state, app_id = _open_state(args)
    if app_id is None:
        print("error: no events ingested yet", file=sys.stderr)
        return 1
    with state.lock().acquire(timeout=LOCK_TIMEOUT):
        ledger = state.open(app_id).ledger
        state.close()
    try:
        trace = build_trace(ledger, args.attribution_id)
    except UnknownAttribution as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(format_trace(trace, ledger.report_currency))
    return 0


def format_trace(trace, report_currency: str = "USD") -> str:
    sym = "$" if report_currency == "USD" else report_currency + " "
    out = [f"trace {trace.attribution_id} — {trace.item_id}"]
    n = 1
    for segment in trace.segments:
        for step in segment.steps:
            out.append(f"  {n}. {step.description}")
            n += 1
    out.append(f"  {trace.rendered_arithmetic}")
    out.append(f"  = {sym}{display_2dp(trace.total)} (exact {exact_str(trace.total)})")
    return "\n".join(out)


# --- casestudy -------------------------------------------------------------------

def cmd_casestudy(args) -> int:
    if args.scale < 1:
        print("error: --scale must be a positive integer", file=sys.stderr)
        return 2
    strategy = Strategy(args.strategy) if args.strategy else Strategy.FIFO
    with tempfile.TemporaryDirectory(prefix="spendtrace-case-") as tmp:
        state = StateDir(Path(tmp), strategy=strategy)
        log = Path(tmp) / "casestudy.jsonl"
        log.write_text("\n".join(case_study_lines(scale=args.scale)) + "\n",
                       encoding="utf-8")
        report = state.ingest_file(log)
        print(_ingest_summary(report))
        ledger = state.open("demo").ledger

        doc = build_report_document(ledger, grouping="day")
        print()
        print(_report_table(doc))
        print()
        for event_id in (CHEST_EVENT_ID, WIZARDS_EVENT_ID):
            print(format_trace(build_trace(ledger, event_id)))
            print()
        state.close()

        chest = ledger.attribution(CHEST_EVENT_ID).total_basis
        wizards = ledger.attribution(WIZARDS_EVENT_ID).total_basis
        ok = True
        for name, got, want in (("magic chest", chest, CHEST_BASIS),
                                ("wizard cards", wizards, WIZARDS_BASIS)):
            verdict = "ok" if got == want else f"MISMATCH (expected {exact_str(want)})"
            print(f"golden {name}: {exact_str(got)} (${display_2dp(got)}) {verdict}")
            ok = ok and got == want
        return 0 if ok and report.accepted == 6 else 1


# --- serve -----------------------------------------------------------------------

def cmd_serve(args) -> int:
    import uvicorn

    from .config import load_config
    from .service import create_app

    config = load_config(args.config)
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((config.listen_host, config.listen_port))
        probe.close()
    except OSError as exc:
        print(f"error: cannot bind {config.listen_host}:{config.listen_port}: {exc}",
              file=sys.stderr)
        return 2
    app = create_app(config)
    print(f"listening on http://{config.listen_host}:{config.listen_port}")
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
