"""Report assembly, serialization and schema validation."""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any

import numpy as np

from .core import format_angle

SCHEMA_VERSION = "1.0"
VERSION = "0.1.0"


def _clean(x: Any) -> Any:
    """JSON-ready copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):  # enums
        return x.value
    return x


def angle_record(value: float) -> dict[str, Any]:
    return {"radians": float(value), "text": format_angle(value)}


def check(name: str, anchor: str, verdict: str, margins: dict[str, Any] | None = None,
          hypothesis_holds: bool | None = None, **details) -> dict[str, Any]:
    out = {"name": name, "anchor": anchor, "verdict": verdict, "margins": margins or {}}
    if hypothesis_holds is not None:
        out["hypothesis_holds"] = bool(hypothesis_holds)
    if details:
        out["details"] = details
    return out


def make_report(command: str, config: dict[str, Any], checks: list[dict], artifacts: list[str] | None = None,
                **extra) -> dict[str, Any]:
    rep = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "diametral", "version": VERSION},
        "command": command,
        "config": config,
        "checks": checks,
        "artifacts": sorted(artifacts or []),
    }
    rep.update(extra)
    return _clean(rep)


def dumps(report: dict[str, Any]) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_clean(report), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def load_schema() -> dict[str, Any]:
    return json.loads(resources.files("diametral").joinpath("report.schema.json").read_text())


def validate(report: dict[str, Any]) -> None:
    """Raise ``jsonschema.ValidationError`` if the report does not match the shipped schema."""
    import jsonschema

    jsonschema.validate(report, load_schema())


def strip_timing(report: dict[str, Any]) -> dict[str, Any]:
    out = {k: v for k, v in report.items() if k != "timing"}
    if "jobs" in out:
        out["jobs"] = [strip_timing(j) for j in out["jobs"]]
    return out
