"""JSON reports for command runs.

A report is a dict with a versioned schema tag, the command and options, a
SHA-256 digest of the canonical input, the certificates in order, and a
timestamp.  The timestamp is the only field excluded from the digest, so
re-running a command on the same input reproduces every other field.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Sequence

from . import __version__
from .certificates import Certificate, to_jsonable

SCHEMA = "cosphere.report/1"
CONVENTIONS = "d: no 1/2; wedge: determinant; interior: first slot"


@dataclass(frozen=True)
class Entry:
    """One labelled certificate plus free-form data shown to the user."""

    label: str
    certificate: Certificate
    data: dict[str, Any] | None = None


def input_digest(canonical_input: str, command: str, options: dict[str, Any]) -> str:
    payload = json.dumps({"input": canonical_input, "command": command, "options": options}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def build_report(
    command: str,
    source: str,
    canonical_input: str,
    options: dict[str, Any],
    entries: Sequence[Entry],
    timestamp: str | None = None,
) -> dict[str, Any]:
    results = []
    for e in entries:
        item = {"label": e.label, **e.certificate.to_json()}
        if e.data:
            item["data"] = to_jsonable(e.data)
        results.append(item)
    return {
        "schema": SCHEMA,
        "version": __version__,
        "conventions": CONVENTIONS,
        "command": command,
        "source": source,
        "options": dict(sorted(options.items())),
        "digest": input_digest(canonical_input, command, options),
        "all_verified": all(e.certificate.verified for e in entries),
        "verdicts": [{"label": e.label, "verdict": e.certificate.verdict.value} for e in entries],
        "results": results,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def deterministic_part(report: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in report.items() if k != "timestamp"}


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _short(value: Any, limit: int = 100) -> str:
    text = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
    return text if len(text) <= limit else text[: limit - 3] + "..."


def render_text(report: dict[str, Any]) -> str:
    lines = [f"{report['command']} {report['source']}"]
    width = max((len(v["label"]) for v in report["verdicts"]), default=0)
    for item in report["results"]:
        lines.append(f"  {item['label']:<{width}}  {item['verdict']}  ({item['method']})")
        if item.get("data"):
            for key, value in item["data"].items():
                lines.append(f"      {key}: {_short(value)}")
        failed = item["witness"].get("failed") if isinstance(item["witness"], dict) else None
        if failed:
            lines.append(f"      failed: {_short(failed)}")
        elif item["verdict"].startswith("Refuted") and item["witness"]:
            lines.append(f"      witness: {_short(item['witness'])}")
    lines.append(f"  digest {report['digest'][:16]}")
    return "\n".join(lines) + "\n"
