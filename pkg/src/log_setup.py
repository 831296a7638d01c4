"""
log_setup.py
------------
Console logging with bracket tags ([INFO], [WARNING], ...) and the append-only
run log under logs/.
"""

from __future__ import annotations

import logging
import os
from datetime import datetime, timezone
from typing import Dict

from settings import get_settings

LOG_FORMAT = "[%(levelname)s] %(message)s"
_configured = False


def get_logger(name: str) -> logging.Logger:
    global _configured
    if not _configured:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root = logging.getLogger("pvar")
        root.addHandler(handler)
        root.setLevel(os.environ.get("PVAR_LOG_LEVEL", "WARNING").upper())
        root.propagate = False
        _configured = True
    return logging.getLogger(f"pvar.{name}")


def append_run_log(summary: Dict, filename: str = "pvar_runs.log") -> str:
    """Append one run summary block to logs/<filename>; returns the path."""
    logs_dir = get_settings().logs_dir
    os.makedirs(logs_dir, exist_ok=True)
    path = logs_dir / filename

    with open(path, "a") as f:
        f.write(f"\n{'=' * 72}\n")
        f.write(f"Run - {datetime.now(timezone.utc).isoformat()}\n")
        f.write(f"{'=' * 72}\n")
        for key, value in summary.items():
            f.write(f"  - {key}: {value}\n")
    return str(path)
