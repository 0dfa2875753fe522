"""Canonical JSON reports.

Reports are meant to be byte-identical across runs for identical inputs, so
everything that varies run to run (wall time, paths, environment) is banned
from them; the command line prints such chatter to stderr instead.  Key order
is sorted, separators are fixed, output is ASCII, and every report ends in
exactly one newline.
"""

from __future__ import annotations

import hashlib
import json
from typing import Optional


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def input_digest(inputs) -> str:
    """Hex digest of the canonical serialization of the parsed inputs, so a
    report pins down exactly what it was computed from."""
    return hashlib.sha256(canonical_json(inputs).encode("ascii")).hexdigest()


def build_report(command: str, inputs, result) -> dict:
    return {
        "command": command,
        "input_sha256": input_digest(inputs),
        "result": result,
    }


def emit(report: dict, json_out: Optional[str] = None) -> str:
    text = canonical_json(report)
    if json_out:
        with open(json_out, "w", encoding="ascii") as fh:
            fh.write(text)
    return text
