"""HTTP report service.

POST /v1/apps/{app}/events                     submit events (JSONL or JSON array)
GET  /v1/apps/{app}/report?from&to&group&tz    spend report
GET  /v1/apps/{app}/attributions/{id}/trace    derivation trace
GET  /v1/apps/{app}/catalog                    demo shop catalog

Money travels as strings only: each amount is {"exact": "1999/1000",
"display": "1.99"}. One writer task per app; a POST ingests into a private
copy of the ledger and publishes it atomically, so GETs always read a
complete snapshot. Accepted events hit disk (fsync) before the response.
Report bytes are produced by the same renderer the CLI uses, so the two
are byte-identical for the same state.
"""

from __future__ import annotations

import copy
import json
import threading
from dataclasses import dataclass
from datetime import date

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .config import AppConfig, ServiceConfig
from .errors import InvalidDateRange, TrackerError, UnknownApp
from .ingest import ingest_lines
from .ledger import Ledger
from .reports import (
    GROUPINGS,
    DateRange,
    build_report_document,
    build_trace_document,
    parse_tz_offset,
    render_json,
)
from .store import EventLogStore

API_PREFIX = "/v1"


@dataclass
class _App:
    config: AppConfig
    store: EventLogStore
    ledger: Ledger  # published snapshot; swapped whole, never mutated in place
    write_lock: threading.Lock


def _json_error(exc: TrackerError) -> Response:
    body = {"code": exc.code, "message": str(exc)}
    return Response(content=render_json(body), status_code=exc.http_status,
                    media_type="application/json")


def _canonical_json(doc) -> Response:
    return Response(content=render_json(doc), media_type="application/json")


def _body_to_lines(body: bytes, content_type: str) -> list[str]:
    """A JSON array body becomes one canonical line per element."""
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise _MalformedBody(f"body is not UTF-8: {exc}") from None
    if "json" in (content_type or "") and text.lstrip().startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _MalformedBody(str(exc)) from None
        if not isinstance(items, list):
            raise _MalformedBody("JSON body must be an array of events")
        return [json.dumps(item, sort_keys=True, separators=(",", ":")) for item in items]
    return text.splitlines()


class _MalformedBody(TrackerError):
    code = "malformed_body"
    http_status = 400


def create_app(config: ServiceConfig) -> FastAPI:
    api = FastAPI(title="spendtrace", openapi_url=None)
    apps: dict[str, _App] = {}
    config.data_dir.mkdir(parents=True, exist_ok=True)
    for app_config in config.apps:
        ledger = Ledger(app_config.app_id,
                        report_currency=app_config.report_currency,
                        strategy=app_config.strategy)
        store = EventLogStore(config.data_dir / f"{app_config.app_id}.jsonl")
        store.replay_into(ledger)
        apps[app_config.app_id] = _App(
            config=app_config, store=store, ledger=ledger,
            write_lock=threading.Lock(),
        )

    origins = sorted({a.cors_origin for a in config.apps if a.cors_origin})
    if origins:
        api.add_middleware(
            CORSMiddleware, allow_origins=origins,
            allow_methods=["GET", "POST"], allow_headers=["*"],
        )

    def _lookup(app_id: str) -> _App:
        app = apps.get(app_id)
        if app is None:
            raise UnknownApp(app_id)
        return app

    @api.exception_handler(TrackerError)
    async def _tracker_error(_request: Request, exc: TrackerError):
        return _json_error(exc)

    @api.exception_handler(Exception)
    async def _internal_error(_request: Request, _exc: Exception):
        body = {"code": "internal_error", "message": "internal error"}
        return Response(content=render_json(body), status_code=500,
                        media_type="application/json")

    @api.post(API_PREFIX + "/apps/{app_id}/events")
    async def post_events(app_id: str, request: Request):
        app = _lookup(app_id)
        body = await request.body()
        if len(body) > config.max_body_bytes:
            exc = _MalformedBody(f"body exceeds {config.max_body_bytes} bytes")
            exc.http_status = 413
            return _json_error(exc)
        lines = _body_to_lines(body, request.headers.get("content-type", ""))

        with app.write_lock:
            # Ingest into a private copy; readers keep the old snapshot until
            # the swap below. Lines for another app_id reject as app_mismatch.
            working = copy.deepcopy(app.ledger)
            report = ingest_lines(lines, working, on_accept=app.store.append)
            app.ledger = working  # atomic publish; file already fsynced
        doc = {
            "accepted": report.accepted,
            "rejected": [
                {"line_no": r.line_no, "code": r.code, "reason": r.reason}
                for r in report.rejected
            ],
        }
        return _canonical_json(doc)

    @api.get(API_PREFIX + "/apps/{app_id}/report")
    async def get_report(app_id: str, request: Request):
        app = _lookup(app_id)
        params = request.query_params
        grouping = params.get("group", "none")
        if grouping not in GROUPINGS:
            raise InvalidDateRange(f"group must be one of {GROUPINGS}")
        date_range = DateRange(_parse_date(params.get("from")), _parse_date(params.get("to")))
        tz_offset = parse_tz_offset(params.get("tz", "+00:00"))
        doc = build_report_document(app.ledger, date_range=date_range,
                                    grouping=grouping, tz_offset=tz_offset)
        return _canonical_json(doc)

    @api.get(API_PREFIX + "/apps/{app_id}/attributions/{attribution_id}/trace")
    async def get_trace(app_id: str, attribution_id: str):
        app = _lookup(app_id)
        return _canonical_json(build_trace_document(app.ledger, attribution_id))

    @api.get(API_PREFIX + "/apps/{app_id}/catalog")
    async def get_catalog(app_id: str):
        app = _lookup(app_id)
        path = app.config.catalog_path
        if path is None or not path.exists():
            raise UnknownApp(f"{app_id} (no catalog configured)")
        return _canonical_json(json.loads(path.read_text(encoding="utf-8")))

    api.state.apps = apps
    api.state.config = config
    return api


def _parse_date(text: str | None) -> date | None:
    if text in (None, ""):
        return None
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise InvalidDateRange(f"bad date {text!r}, expected YYYY-MM-DD") from None
