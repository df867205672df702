"""Durable state: one append-only JSONL file per app, replayed on open.

The log file is the source of truth; the in-memory ledger is a pure
function of it. Every accepted event is flushed and fsynced before the
caller is told it was accepted, so an acknowledged event survives a kill.
A state directory pins strategy and report currency in a meta file at
first use — replaying the same log under a different strategy would
rewrite history, so that requires a fresh directory.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import IO

from filelock import FileLock

from .errors import StateDirError, TrackerError
from .ingest import (
    EventRecord,
    IngestReport,
    Rejection,
    ingest_lines,
    parse_event_line,
    serialize_record,
)
from .ledger import Ledger
from .model import Strategy

META_FILE = "state.json"
LOCK_FILE = ".lock"


class EventLogStore:
    """Append-only event log for one app."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._handle: IO[str] | None = None

    def exists(self) -> bool:
        return self.path.exists()

    def replay_into(self, ledger: Ledger) -> int:
        """Apply every persisted line in file order; the log must be clean."""
        if not self.path.exists():
            return 0
        count = 0
        with self.path.open("r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                record = parse_event_line(line)
                ledger.apply(record.event)
                count += 1
        return count

    def append(self, record: EventRecord) -> None:
        """Write one accepted event durably (flush + fsync)."""
        if self._handle is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = self.path.open("a", encoding="utf-8")
        self._handle.write(serialize_record(record) + "\n")
        self._handle.flush()
        os.fsync(self._handle.fileno())

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


class AppState:
    """A ledger bound to its log file."""

    def __init__(self, app_id: str, store: EventLogStore, ledger: Ledger):
        self.app_id = app_id
        self.store = store
        self.ledger = ledger

    def ingest(self, lines) -> IngestReport:
        return ingest_lines(lines, self.ledger, on_accept=self.store.append)


class StateDir:
    """A directory of per-app logs shared by the CLI and the service.

    Layout: ``<root>/state.json`` (pinned strategy + report currency),
    ``<root>/<app_id>.jsonl`` per app, and an advisory lock file so the
    CLI and a running service don't interleave writers.
    """

    def __init__(self, root: Path, strategy: Strategy | None = None,
                 report_currency: str | None = None):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        meta = self._load_meta()
        if meta is None:
            self.strategy = strategy or Strategy.FIFO
            self.report_currency = report_currency or "USD"
            self._write_meta()
        else:
            pinned = Strategy(meta["strategy"])
            if strategy is not None and strategy is not pinned:
                raise StateDirError(
                    f"state dir {self.root} is pinned to {pinned.value}; replaying under "
                    f"{strategy.value} needs a fresh state dir"
                )
            self.strategy = pinned
            self.report_currency = meta["report_currency"]
            if report_currency is not None and report_currency != self.report_currency:
                raise StateDirError(
                    f"state dir {self.root} reports in {self.report_currency}, not {report_currency}"
                )
        self._apps: dict[str, AppState] = {}

    def lock(self) -> FileLock:
        return FileLock(str(self.root / LOCK_FILE))

    def apps(self) -> list[str]:
        on_disk = {p.stem for p in self.root.glob("*.jsonl")}
        return sorted(on_disk | set(self._apps))

    def open(self, app_id: str) -> AppState:
        if app_id not in self._apps:
            ledger = Ledger(app_id, report_currency=self.report_currency, strategy=self.strategy)
            store = EventLogStore(self.root / f"{app_id}.jsonl")
            store.replay_into(ledger)
            self._apps[app_id] = AppState(app_id, store, ledger)
        return self._apps[app_id]

    def ingest_file(self, path: Path) -> IngestReport:
        """Route a mixed-app JSONL file to the right per-app ledgers."""
        with Path(path).open("r", encoding="utf-8") as fh:
            lines = fh.readlines()

        report = IngestReport()
        per_app: dict[str, list[tuple[int, str]]] = {}
        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                app_id = json.loads(line).get("app_id")
            except (json.JSONDecodeError, AttributeError):
                app_id = None
            if not isinstance(app_id, str) or not app_id:
                # Unroutable; run the real parser just for its precise error.
                try:
                    parse_event_line(line)
                    raise StateDirError("line has no app_id")
                except TrackerError as exc:
                    report.rejected.append(Rejection(line_no, exc.code, str(exc)))
                continue
            per_app.setdefault(app_id, []).append((line_no, line))

        for app_id in sorted(per_app):
            state = self.open(app_id)
            numbered = per_app[app_id]
            sub = ingest_lines((line for _, line in numbered), state.ledger,
                               on_accept=state.store.append)
            renumber = {local: original for local, (original, _) in
                        enumerate(numbered, start=1)}
            report.accepted += sub.accepted
            for rejection in sub.rejected:
                report.rejected.append(
                    Rejection(renumber[rejection.line_no], rejection.code, rejection.reason)
                )
        report.rejected.sort(key=lambda r: r.line_no)
        return report

    def close(self) -> None:
        for state in self._apps.values():
            state.store.close()

    def _meta_path(self) -> Path:
        return self.root / META_FILE

    def _load_meta(self) -> dict | None:
        path = self._meta_path()
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def _write_meta(self) -> None:
        self._meta_path().write_text(
            json.dumps({"strategy": self.strategy.value,
                        "report_currency": self.report_currency},
                       sort_keys=True) + "\n",
            encoding="utf-8",
        )
