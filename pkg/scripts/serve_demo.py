#!/usr/bin/env python3
"""Run the HTTP service with the repo's demo config.

    python scripts/serve_demo.py

Equivalent to `spendtrace serve --config data/demo.toml`. The demo shop
frontend (frontend/) talks to this server.
"""

import sys
from pathlib import Path

from spendtrace.cli import main

if __name__ == "__main__":
    config = Path(__file__).resolve().parent.parent / "data" / "demo.toml"
    sys.exit(main(["serve", "--config", str(config)]))
