"""Service and CLI configuration.

The service reads a TOML file; `SPENDTRACE_LISTEN` and
`SPENDTRACE_DATA_DIR` override the listen address and data directory.

    listen = "127.0.0.1:8077"
    data_dir = "./state"

    [apps.demo]
    report_currency = "USD"
    strategy = "fifo"
    catalog_path = "./data/catalog.json"
    cors_origin = "http://127.0.0.1:8080"
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import StateDirError
from .model import Strategy

LISTEN_ENV = "SPENDTRACE_LISTEN"
DATA_DIR_ENV = "SPENDTRACE_DATA_DIR"

DEFAULT_LISTEN = "127.0.0.1:8077"
DEFAULT_MAX_BODY = 1 << 20


@dataclass(frozen=True)
class AppConfig:
    app_id: str
    report_currency: str = "USD"
    strategy: Strategy = Strategy.FIFO
    catalog_path: Path | None = None
    cors_origin: str | None = None


@dataclass(frozen=True)
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8077
    data_dir: Path = Path("./state")
    max_body_bytes: int = DEFAULT_MAX_BODY
    apps: tuple[AppConfig, ...] = ()

    def app(self, app_id: str) -> AppConfig | None:
        return next((a for a in self.apps if a.app_id == app_id), None)


def _split_listen(listen: str) -> tuple[str, int]:
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise StateDirError(f"listen address {listen!r} must be host:port")
    return host, int(port)


def load_config(path: Path | str, env: dict | None = None) -> ServiceConfig:
    env = os.environ if env is None else env
    path = Path(path)
    with path.open("rb") as fh:
        raw = tomllib.load(fh)

    listen = env.get(LISTEN_ENV) or raw.get("listen", DEFAULT_LISTEN)
    host, port = _split_listen(listen)
    data_dir = Path(env.get(DATA_DIR_ENV) or raw.get("data_dir", "./state"))
    if not data_dir.is_absolute():
        data_dir = (path.parent / data_dir).resolve()

    apps = []
    for app_id, section in raw.get("apps", {}).items():
        catalog = section.get("catalog_path")
        if catalog is not None:
            catalog = Path(catalog)
            if not catalog.is_absolute():
                catalog = (path.parent / catalog).resolve()
        apps.append(AppConfig(
            app_id=app_id,
            report_currency=section.get("report_currency", "USD"),
            strategy=Strategy(section.get("strategy", "fifo")),
            catalog_path=catalog,
            cors_origin=section.get("cors_origin"),
        ))
    if not apps:
        raise StateDirError(f"config {path} declares no [apps.<id>] sections")
    return ServiceConfig(
        listen_host=host,
        listen_port=port,
        data_dir=data_dir,
        max_body_bytes=int(raw.get("max_body_bytes", DEFAULT_MAX_BODY)),
        apps=tuple(apps),
    )


@dataclass(frozen=True)
class CliConfig:
    strategy: Strategy = Strategy.FIFO
    report_currency: str = "USD"
    tz_offset: timedelta = field(default_factory=timedelta)
    output: str = "table"  # table | json | csv
